class CoexsimError(Exception):
    pass


class ConfigError(CoexsimError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class DomainError(CoexsimError, ValueError):
    pass
