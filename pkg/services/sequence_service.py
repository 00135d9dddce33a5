import ast
import math
from functools import lru_cache

from models import FormulaSequence, RatioCheck, TableSequence, Verdict
from utils.error_handlers import (
    AdmissibilityRefusal,
    InvalidInputError,
    SubsequenceExhausted,
)

MIN_HORIZON = 10

_BINARY = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.FloorDiv: lambda a, b: a // b,
}

_FUNCTIONS = {
    "floor": math.floor,
    "log": math.log,
    "log2": math.log2,
}


def _check_node(node, expression):
    """Reject anything outside the integer-sequence grammar."""
    if isinstance(node, ast.Expression):
        return _check_node(node.body, expression)
    if isinstance(node, ast.Name):
        if node.id != "n":
            raise InvalidInputError(
                f"unknown name {node.id!r} in {expression!r}", field="sequence.expression"
            )
        return
    if isinstance(node, ast.Constant):
        if type(node.value) is not int or node.value < 0:
            raise InvalidInputError(
                f"only non-negative integer literals are allowed in {expression!r}",
                field="sequence.expression",
            )
        return
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return _check_node(node.operand, expression)
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int):
                raise InvalidInputError(
                    f"exponents must be integer literals in {expression!r}",
                    field="sequence.expression",
                )
        elif type(node.op) not in _BINARY:
            raise InvalidInputError(
                f"operator {type(node.op).__name__} is not allowed in {expression!r}",
                field="sequence.expression",
            )
        _check_node(node.left, expression)
        _check_node(node.right, expression)
        return
    if isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS):
            raise InvalidInputError(
                f"only floor, log and log2 may be called in {expression!r}",
                field="sequence.expression",
            )
        if len(node.args) != 1 or node.keywords:
            raise InvalidInputError(
                f"{node.func.id} takes exactly one argument in {expression!r}",
                field="sequence.expression",
            )
        _check_node(node.args[0], expression)
        return
    raise InvalidInputError(
        f"unsupported syntax {type(node).__name__} in {expression!r}",
        field="sequence.expression",
    )


def _evaluate(node, n):
    if isinstance(node, ast.Name):
        return n
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.UnaryOp):
        return -_evaluate(node.operand, n)
    if isinstance(node, ast.BinOp):
        left = _evaluate(node.left, n)
        if isinstance(node.op, ast.Pow):
            return left ** node.right.value
        return _BINARY[type(node.op)](left, _evaluate(node.right, n))
    return _FUNCTIONS[node.func.id](_evaluate(node.args[0], n))


@lru_cache(maxsize=64)
def compile_formula(expression):
    """Parse and validate a sequence formula once."""
    try:
        tree = ast.parse(expression.strip(), mode="eval")
    except SyntaxError as e:
        raise InvalidInputError(
            f"cannot parse sequence formula {expression!r}: {e.msg}",
            field="sequence.expression",
        )
    _check_node(tree, expression)
    return tree.body


class SequenceService:
    """The (lambda_n) sequences and their admissibility."""

    @staticmethod
    def evaluate_formula(expression, n):
        """
        Value of an integer formula in n.

        The grammar allows n, integer literals, + - * //, ** with a literal exponent
        and the functions floor, log and log2. The value must be an integer.
        """
        try:
            value = _evaluate(compile_formula(expression), n)
        except (ValueError, ZeroDivisionError, OverflowError) as e:
            raise InvalidInputError(
                f"{expression!r} cannot be evaluated at n={n}: {e}", field="sequence.expression"
            )
        if isinstance(value, float):
            if not value.is_integer():
                raise InvalidInputError(
                    f"{expression!r} is not an integer at n={n} (got {value!r})",
                    field="sequence.expression",
                )
            value = int(value)
        return value

    @staticmethod
    def values(seq, count):
        """
        lambda_1, ..., lambda_count, checked to be strictly increasing positive integers.

        Tables shorter than count return all their values.
        """
        if isinstance(seq, FormulaSequence):
            values = [SequenceService.evaluate_formula(seq.expression, n) for n in range(1, count + 1)]
        elif isinstance(seq, TableSequence):
            values = list(seq.values[:count])
        else:
            raise InvalidInputError(f"unknown sequence type {type(seq).__name__}", field="sequence")
        for k, value in enumerate(values):
            if value < 1:
                raise InvalidInputError(
                    f"lambda_{k + 1} = {value} is not a positive integer",
                    field=f"sequence[{k + 1}]",
                )
            if k and value <= values[k - 1]:
                raise InvalidInputError(
                    f"sequence is not strictly increasing at n={k + 1} "
                    f"({values[k - 1]} then {value})",
                    field=f"sequence[{k + 1}]",
                )
        return values

    @staticmethod
    def check_ratio(seq, horizon):
        """
        Heuristic verdict on limsup lambda_n / n from the first ``horizon`` terms.

        The sequence is called diverging when the largest ratio over [horizon/2,
        horizon] exceeds twice the largest ratio over [1, horizon/4]. A limsup cannot
        be decided from finitely many terms; the verdict is only evidence.
        """
        if horizon < MIN_HORIZON:
            raise InvalidInputError(
                f"horizon must be at least {MIN_HORIZON}", field="caps.horizon"
            )
        values = SequenceService.values(seq, horizon)
        horizon = len(values)
        if horizon < MIN_HORIZON:
            raise InvalidInputError(
                f"sequence table needs at least {MIN_HORIZON} values", field="sequence.values"
            )
        ratios = [value / n for n, value in enumerate(values, start=1)]
        sup_ratio = max(ratios)
        attained_at = ratios.index(sup_ratio) + 1
        early = max(ratios[: max(1, horizon // 4)])
        late = max(ratios[horizon // 2 - 1 :])
        verdict = Verdict.DIVERGING if late > 2.0 * early else Verdict.BOUNDED_SO_FAR
        return RatioCheck(sup_ratio=sup_ratio, attained_at=attained_at, verdict=verdict)

    @staticmethod
    def refuse_if_bounded(seq, horizon):
        """Raise AdmissibilityRefusal unless check_ratio calls the sequence diverging."""
        check = SequenceService.check_ratio(seq, horizon)
        if check.verdict is not Verdict.DIVERGING:
            raise AdmissibilityRefusal(
                f"lambda_n / n looks bounded (sup {check.sup_ratio:g} at n={check.attained_at} "
                f"over the first {horizon} terms); when limsup lambda_n / n is finite no "
                "doubly universal Taylor series exists, so nothing is constructed"
            )
        return check

    @staticmethod
    def iter_subsequence(seq, horizon):
        """
        Greedy ratio-doubling indices mu_1 < mu_2 < ... within the horizon.

        mu_1 = 1 and every later index is the first n whose ratio lambda_n / n is at
        least twice the ratio at the previous index.

        :return: List of (mu, lambda_mu) pairs.
        """
        values = SequenceService.values(seq, horizon)
        chosen = [(1, values[0])]
        threshold = 2.0 * values[0]
        for n, value in enumerate(values[1:], start=2):
            if value / n >= threshold:
                chosen.append((n, value))
                threshold = 2.0 * value / n
        return chosen

    @staticmethod
    def choose_subsequence(seq, count, horizon=4096):
        """
        First ``count`` indices of the ratio-doubling subsequence.

        :raises AdmissibilityRefusal: If the ratio looks bounded.
        :raises SubsequenceExhausted: If fewer than count indices exist within the horizon.
        """
        SequenceService.refuse_if_bounded(seq, horizon)
        chosen = SequenceService.iter_subsequence(seq, horizon)
        if len(chosen) < count:
            raise SubsequenceExhausted(
                f"only {len(chosen)} ratio-doubling indices exist up to n={horizon}; "
                f"raise the horizon to select {count}"
            )
        return [mu for mu, _ in chosen[:count]]
