from src.error_handling.exceptions import (
    InvalidConfig, NonFinite, SingularSystem, ColumnSumViolation, ParseError,
)
from src.error_handling.handlers import (
    ErrorHandler, exit_code_for, EXIT_INPUT_ERROR, EXIT_NUMERICAL_ERROR,
)


def test_exit_codes():
    assert exit_code_for(InvalidConfig("bad")) == EXIT_INPUT_ERROR
    assert exit_code_for(ColumnSumViolation(3, 1.2)) == EXIT_INPUT_ERROR
    assert exit_code_for(ParseError("x.csv", 4, "bad cell")) == EXIT_INPUT_ERROR
    assert exit_code_for(NonFinite("W", 7)) == EXIT_NUMERICAL_ERROR
    assert exit_code_for(SingularSystem("O", 1e18)) == EXIT_NUMERICAL_ERROR
    assert exit_code_for(ValueError("plain")) == EXIT_INPUT_ERROR


def test_context_is_attached():
    error = NonFinite("W", 7).with_context(fold=2, variant="bldl")
    assert error.context == {"what": "W", "iter": 7, "fold": 2, "variant": "bldl"}
    assert "iteration 7" in str(error)


def test_parse_error_message():
    error = ParseError("x.csv", 4, "bad cell")
    assert str(error) == "x.csv:4: bad cell"
    assert error.line == 4


def test_handler_records_errors():
    handler = ErrorHandler()
    handler.handle_error(ColumnSumViolation(1, 0.5), context={"command": "fit"})
    handler.handle_error(RuntimeError("boom"))
    summary = handler.get_error_summary()
    assert summary["total_errors"] == 2
    first, second = summary["errors"]
    assert first["type"] == "column_sum_violation"
    assert first["context"]["command"] == "fit" and first["context"]["col"] == 1
    assert second["type"] == "RuntimeError" and second["exit_code"] == EXIT_INPUT_ERROR


def test_fallback():
    handler = ErrorHandler()
    assert handler.handle_error(NonFinite("D"), fallback_fn=lambda: "fallback") == "fallback"

    def failing():
        raise RuntimeError("still broken")

    assert handler.handle_error(NonFinite("D"), fallback_fn=failing) is None
