"""
Utility modules for error handling, logging and report files
"""

from .error_handler import (
    AppError, ValidationError, UsageError, TruncationTooShort, NoCertificate, NoM0,
    setup_logging, log_error, handle_analysis_error, safe_execute,
    validate_required_fields, validate_range, format_error_for_user,
)
from .report_helpers import CommandResult, ReportWriter, ReportError, get_report_writer, to_jsonable

__all__ = [
    # Error handling
    'AppError',
    'ValidationError',
    'UsageError',
    'TruncationTooShort',
    'NoCertificate',
    'NoM0',
    'setup_logging',
    'log_error',
    'handle_analysis_error',
    'safe_execute',
    'validate_required_fields',
    'validate_range',
    'format_error_for_user',

    # Reports
    'CommandResult',
    'ReportWriter',
    'ReportError',
    'get_report_writer',
    'to_jsonable',
]
