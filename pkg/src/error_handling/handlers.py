"""
Error handling with exit-code mapping and optional fallbacks
"""
from typing import Optional, Callable
from config.constants import ERROR_MESSAGES
from src.error_handling.exceptions import BLDLError
import traceback
from src.error_handling.logger import get_logger

logger = get_logger("errors")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NUMERICAL_ERROR = 2


def exit_code_for(error: Exception) -> int:
    """Input errors (and unknown ones) map to 1, numerical failures to 2"""
    if isinstance(error, BLDLError) and not error.is_input_error:
        return EXIT_NUMERICAL_ERROR
    return EXIT_INPUT_ERROR


class ErrorHandler:
    """Handle errors gracefully with fallback strategies"""

    def __init__(self):
        self.error_count = 0
        self.error_log = []

    def handle_error(self,
                     error: Exception,
                     context: dict = None,
                     fallback_fn: Optional[Callable] = None):
        """
        Log and record an error, then run the fallback if one is given

        Args:
            error: Exception object
            context: Additional context (command, fold, variant, ...)
            fallback_fn: Fallback function to call

        Returns:
            Fallback result, or None
        """

        self.error_count += 1
        context = dict(context or {})

        if isinstance(error, BLDLError):
            type_name = error.error_type.value
            error_msg = ERROR_MESSAGES[error.error_type]
            context.update(error.context)
        else:
            type_name = type(error).__name__
            error_msg = f"Unexpected error: {str(error)}"

        logger.warning(
            f"Error #{self.error_count}: {type_name}\n"
            f"Message: {error_msg}\n"
            f"Context: {context}\n"
            f"Details: {str(error)}"
        )

        self.error_log.append({
            'count': self.error_count,
            'type': type_name,
            'message': error_msg,
            'context': context,
            'error': str(error),
            'exit_code': exit_code_for(error),
            'traceback': traceback.format_exc()
        })

        if fallback_fn:
            try:
                logger.info(f"Executing fallback for {type_name}")
                return fallback_fn()
            except Exception as fallback_error:
                logger.error(f"Fallback failed: {str(fallback_error)}")
                return None

        return None

    def get_error_summary(self) -> dict:
        """Get error summary"""
        return {
            'total_errors': self.error_count,
            'errors': self.error_log
        }


# Global error handler
error_handler = ErrorHandler()
