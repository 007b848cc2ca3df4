"""
Error handling og logging for polya-carlson
"""

import logging
from datetime import datetime
from typing import Optional, Any
from functools import wraps

import numpy as np


class AppError(Exception):
    """Base exception class for application errors"""

    def __init__(self, message: str, error_code: str = None, details: Any = None):
        self.message = message
        self.error_code = error_code or "GENERIC_ERROR"
        self.details = details
        self.timestamp = datetime.now()
        super().__init__(self.message)

    def to_dict(self) -> dict:
        """Serialiserbar form for rapporter, uten tidsstempel"""
        return {
            'error_code': self.error_code,
            'message': self.message,
            'details': self.details,
        }


class ValidationError(AppError):
    """Exception for validation errors"""

    def __init__(self, message: str, field: str = None, value: Any = None, error_code: str = "VALIDATION_ERROR"):
        super().__init__(message, error_code, {"field": field, "value": value})


# ============= PRECONDITIONS =============

class UsageError(ValidationError):
    """Ugyldig kommandolinje eller ugyldige knotter"""

    def __init__(self, message: str, field: str = None, value: Any = None):
        super().__init__(message, field, value, error_code="UsageError")


class BadAngles(ValidationError):
    def __init__(self, phi: float, psi: float):
        super().__init__(f"Krever 0 < phi - psi < 2*pi, fikk phi={phi}, psi={psi}",
                         field="phi-psi", value=phi - psi, error_code="BadAngles")


class BadRadii(ValidationError):
    def __init__(self, message: str, value: Any = None):
        super().__init__(message, field="radius", value=value, error_code="BadRadii")


class DuplicateNodes(ValidationError):
    def __init__(self, count: int):
        super().__init__(f"Nodene må være distinkte ({count} duplikater)",
                         field="nodes", value=count, error_code="DuplicateNodes")


class TooFewPoints(ValidationError):
    def __init__(self, available: int, requested: int):
        super().__init__(f"Punktskyen har {available} punkter, trenger {requested}",
                         field="n", value=requested, error_code="TooFewPoints")


# ============= DATA SUFFICIENCY =============

class TruncationTooShort(AppError):
    """A coefficient beyond the materialized truncation order was requested"""

    def __init__(self, needed: int, available: int, what: str = "series"):
        super().__init__(
            f"{what} er materialisert til orden {available}, trenger {needed}",
            "TruncationTooShort",
            {"needed": needed, "available": available},
        )
        self.needed = needed
        self.available = available


# ============= EXACT ALGEBRA =============

class NonUnitConstantTerm(AppError):
    def __init__(self, constant_term: int):
        super().__init__(f"Nevnerens konstantledd er {constant_term}, må være ±1",
                         "NonUnitConstantTerm", {"constant_term": str(constant_term)})


class ZeroDenominator(AppError):
    def __init__(self):
        super().__init__("Nevneren er nullpolynomet", "ZeroDenominator")


class NotDivisible(AppError):
    def __init__(self, what: str):
        super().__init__(f"Eksakt divisjon feilet: {what}", "NotDivisible")


class NoRationalFit(AppError):
    def __init__(self, degree: int):
        super().__init__(f"Ingen rasjonal funksjon med grad <= {degree} passer koeffisientene",
                         "NoRationalFit", {"degree": degree})


class InconsistentCertificate(AppError):
    def __init__(self, sup_bound: float, witness: Any):
        super().__init__(
            f"Sup-grense {sup_bound} < 1 men polynomet har en ikke-null koeffisient",
            "InconsistentCertificate",
            {"sup_bound": sup_bound, "witness": witness},
        )


class DegenerateEquation(AppError):
    def __init__(self):
        super().__init__("Alle koeffisientene i differensialligningen er null", "DegenerateEquation")


class SingularIndex(AppError):
    def __init__(self, index: int):
        super().__init__(f"Ledende rekursjonskoeffisient forsvinner ved n={index}",
                         "SingularIndex", {"index": index})
        self.index = index


class NonIntegerCoefficient(AppError):
    def __init__(self, index: Any, value: Any):
        super().__init__(f"Koeffisient {index} er ikke et heltall: {value}",
                         "NonIntegerCoefficient", {"index": index, "value": str(value)})


class LeadingCoeffVanishes(AppError):
    def __init__(self, where: Any):
        super().__init__(f"Ledende koeffisient forsvinner ved {where}",
                         "LeadingCoeffVanishes", {"where": str(where)})


# ============= NUMERICS =============

class QuadratureDivergence(AppError):
    def __init__(self, last_change: float, tol: float):
        super().__init__(f"Kvadraturen stabiliserte seg ikke (endring {last_change:.3e} > {tol:.1e})",
                         "QuadratureDivergence", {"last_change": last_change, "tol": tol})


class StepFailure(AppError):
    def __init__(self, position: complex, residual: float):
        super().__init__(f"Taylor-steg feilet ved z={position} (residual {residual:.3e})",
                         "StepFailure", {"position": [position.real, position.imag], "residual": residual})


class PathOutsideDomain(AppError):
    def __init__(self, point: complex, radius: float):
        super().__init__(f"Punktet {point} ligger utenfor disken med radius {radius}",
                         "PathOutsideDomain", {"point": [point.real, point.imag], "radius": radius})


# ============= NEGATIVE CERTIFICATES =============

class NoCertificate(AppError):
    def __init__(self, best_bound: float, target: float, n_max: int):
        super().__init__(
            f"Ingen kapasitetsgrense under {target} funnet opp til n={n_max} (beste {best_bound:.6f})",
            "NoCertificate",
            {"best_bound": best_bound, "target": target, "n_max": n_max},
        )


class NoM0(AppError):
    def __init__(self, m_max: int):
        super().__init__(f"Ingen m <= {m_max} gir Hankel-grense < 1", "NoM0", {"m_max": m_max})


# Configure logging
def setup_logging(level=logging.INFO):
    """Set up application logging"""

    # Create logger
    logger = logging.getLogger('polya')
    logger.setLevel(level)

    # Remove existing handlers
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    # Create console handler
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    console_handler.setFormatter(formatter)

    # Add handler to logger
    logger.addHandler(console_handler)

    return logger


# Global logger instance
logger = setup_logging()


def log_error(error: Exception, context: str = None):
    """
    Log error with context information

    Args:
        error: Exception object
        context: Additional context information
    """
    error_info = {
        'error_type': type(error).__name__,
        'error_message': str(error),
        'context': context,
        'timestamp': datetime.now().isoformat()
    }

    if hasattr(error, 'error_code'):
        error_info['error_code'] = error.error_code

    if hasattr(error, 'details'):
        error_info['details'] = error.details

    logger.error(f"Application Error: {error_info}")


def handle_analysis_error(func):
    """
    Decorator for handling numerical and arithmetic failures inside commands
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AppError:
            raise
        except (ZeroDivisionError, OverflowError, np.linalg.LinAlgError, FloatingPointError) as e:
            log_error(e, context=f"Numerical failure in {func.__name__}")
            raise AppError(f"Numerisk feil: {e}", "NUMERICAL_ERROR")
        except (KeyError, TypeError, ValueError, AttributeError, IndexError) as e:
            log_error(e, context=f"Bad input in {func.__name__}")
            raise ValidationError(f"Ugyldig input: {e}")

    return wrapper


def safe_execute(func, default_value=None, context: str = None):
    """
    Safely execute a function and return default value on error

    Args:
        func: Function to execute
        default_value: Value to return on error
        context: Context for error logging

    Returns:
        Function result or default_value on error
    """
    try:
        return func()
    except Exception as e:
        log_error(e, context=context)
        return default_value


def validate_required_fields(data: dict, required_fields: list) -> None:
    """
    Validate that required fields are present and not empty

    Args:
        data: Dictionary to validate
        required_fields: List of required field names

    Raises:
        ValidationError: If any required field is missing or empty
    """
    for field in required_fields:
        if field not in data:
            raise ValidationError(f"Påkrevd felt mangler: {field}", field=field)

        if data[field] is None or (isinstance(data[field], str) and data[field].strip() == ""):
            raise ValidationError(f"Påkrevd felt kan ikke være tomt: {field}", field=field, value=data[field])


def validate_range(name: str, value: Any, low: Optional[float] = None, high: Optional[float] = None) -> None:
    """
    Validate that a numeric knob lies in [low, high]

    Raises:
        UsageError: If value is missing or out of range
    """
    if value is None:
        raise UsageError(f"Mangler verdi for {name}", field=name)
    if low is not None and value < low:
        raise UsageError(f"{name} må være >= {low}, fikk {value}", field=name, value=value)
    if high is not None and value > high:
        raise UsageError(f"{name} må være <= {high}, fikk {value}", field=name, value=value)


def format_error_for_user(error: Exception) -> str:
    """
    Format error message for display on stderr

    Args:
        error: Exception object

    Returns:
        User-friendly error message
    """
    if isinstance(error, ValidationError):
        return f"Ugyldig input: {error.message}"
    elif isinstance(error, (NoCertificate, NoM0)):
        return f"Negativt sertifikat: {error.message}"
    elif isinstance(error, AppError):
        return f"{error.error_code}: {error.message}"
    else:
        # Don't expose internal errors to users
        log_error(error, context="Unexpected error shown to user")
        return "En uventet feil oppstod."
