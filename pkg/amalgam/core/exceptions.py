# amalgam/core/exceptions.py
# Custom exceptions for the amalgam embedding toolkit

import json
import sys

# Process exit codes (sysexits)
EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70
EX_CONFIG = 78


class AmalgamException(Exception):
    """Base exception for the amalgam toolkit"""
    def __init__(self, message: str, exit_code: int = EX_SOFTWARE):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class UsageException(AmalgamException):
    """Exception raised for bad command-line flags or unparseable specs"""
    def __init__(self, message: str = "Invalid usage.", exit_code: int = EX_USAGE):
        super().__init__(message, exit_code)


class MalformedQuery(AmalgamException):
    """Exception raised when a space spec violates its own invariants"""
    def __init__(self, message: str = "Malformed embedding query.", exit_code: int = EX_USAGE):
        super().__init__(message, exit_code)


class UnsupportedPair(AmalgamException):
    """Exception raised when no catalogue entry covers a family pair"""
    def __init__(self, message: str = "Space pair is not in the theorem catalogue.", exit_code: int = EX_USAGE):
        super().__init__(message, exit_code)


class OutOfDualityRange(AmalgamException):
    """Exception raised when a query cannot be dualized"""
    def __init__(self, message: str = "Exponents outside the duality range (1, inf).", exit_code: int = EX_USAGE):
        super().__init__(message, exit_code)


class DataFormatException(AmalgamException):
    """Exception raised when grid data cannot be decoded"""
    def __init__(self, message: str = "Invalid grid function data.", exit_code: int = EX_DATAERR):
        super().__init__(message, exit_code)


class SpecTooSmall(AmalgamException):
    """Exception raised when a grid cannot hold the requested bank"""
    def __init__(self, message: str = "Grid too small for the decomposition bank.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class GridTooSmall(AmalgamException):
    """Exception raised when a probe family does not fit on the grid"""
    def __init__(self, message: str = "Grid too small for the probe family.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class CoverageGap(AmalgamException):
    """Exception raised when the alpha covering leaves frequencies uncovered"""
    def __init__(self, message: str = "Alpha covering lower bound failed.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class IndexOutOfRange(AmalgamException):
    """Exception raised when a block index is outside the bank"""
    def __init__(self, message: str = "Block index outside the bank.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class NotBandLimited(AmalgamException):
    """Exception raised when a function has spectral mass outside its stated ball"""
    def __init__(self, message: str = "Function is not band-limited to the stated ball.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class UnsupportedSpace(AmalgamException):
    """Exception raised when a space has no grid norm"""
    def __init__(self, message: str = "Space has no grid norm.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class SweepDegenerate(AmalgamException):
    """Exception raised when a probe sweep has too few usable points"""
    def __init__(self, message: str = "Fewer than 4 usable sweep points.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class DegenerateFit(AmalgamException):
    """Exception raised when a growth fit is ill-conditioned"""
    def __init__(self, message: str = "Degenerate log-log fit.", exit_code: int = EX_SOFTWARE):
        super().__init__(message, exit_code)


class ConfigurationException(AmalgamException):
    """Exception raised when settings are out of range"""
    def __init__(self, message: str = "Invalid configuration.", exit_code: int = EX_CONFIG):
        super().__init__(message, exit_code)


def handle_amalgam_exception(exc: AmalgamException) -> int:
    """Report an AmalgamException on stderr and return its exit code"""
    payload = {
        "error": type(exc).__name__,
        "message": exc.message,
        "exit_code": exc.exit_code,
    }
    print(json.dumps(payload), file=sys.stderr)
    return exc.exit_code
