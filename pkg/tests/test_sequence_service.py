import pytest

from models import FormulaSequence, TableSequence, Verdict
from services.sequence_service import SequenceService
from utils.error_handlers import AdmissibilityRefusal, InvalidInputError, SubsequenceExhausted


@pytest.mark.parametrize(
    "expression, n, expected",
    [
        ("n**2", 7, 49),
        ("n*floor(log2(n))", 8, 24),
        ("3*n+1", 4, 13),
        ("n//2", 7, 3),
        ("-n+10", 3, 7),
        ("n**3", 2, 8),
    ],
)
def test_evaluate_formula(expression, n, expected):
    assert SequenceService.evaluate_formula(expression, n) == expected


@pytest.mark.parametrize(
    "expression",
    ["n**n", "__import__('os')", "n/2", "m+1", "n.real", "floor(n, 2)", "n +", "1.5*n"],
)
def test_formula_grammar_rejects(expression):
    with pytest.raises(InvalidInputError) as excinfo:
        SequenceService.evaluate_formula(expression, 3)
    assert excinfo.value.field == "sequence.expression"


def test_non_integer_value_is_rejected():
    with pytest.raises(InvalidInputError):
        SequenceService.evaluate_formula("log(n)", 3)


def test_values_must_increase():
    with pytest.raises(InvalidInputError) as excinfo:
        SequenceService.values(TableSequence(values=(1, 2, 5, 4)), 4)
    assert excinfo.value.field == "sequence[4]"


def test_values_must_be_positive():
    with pytest.raises(InvalidInputError) as excinfo:
        SequenceService.values(FormulaSequence(expression="n-1"), 3)
    assert excinfo.value.field == "sequence[1]"


def test_square_ratio_diverges():
    check = SequenceService.check_ratio(FormulaSequence(expression="n**2"), 1000)
    assert check.verdict is Verdict.DIVERGING
    assert check.sup_ratio == 1000
    assert check.attained_at == 1000


def test_linear_ratio_is_bounded():
    check = SequenceService.check_ratio(FormulaSequence(expression="2*n"), 1000)
    assert check.verdict is Verdict.BOUNDED_SO_FAR
    assert check.sup_ratio == 2


def test_shifted_identity_ratio_peaks_at_start():
    check = SequenceService.check_ratio(FormulaSequence(expression="n+1"), 10)
    assert check.verdict is Verdict.BOUNDED_SO_FAR
    assert (check.sup_ratio, check.attained_at) == (2, 1)


def test_short_horizon_is_rejected():
    with pytest.raises(InvalidInputError):
        SequenceService.check_ratio(FormulaSequence(expression="n**2"), 5)


def test_square_subsequence_doubles():
    chosen = SequenceService.choose_subsequence(FormulaSequence(expression="n**2"), 5)
    assert chosen == [1, 2, 4, 8, 16]


def test_subsequence_ratios_at_least_double():
    seq = FormulaSequence(expression="n*floor(log2(n))+n")
    pairs = SequenceService.iter_subsequence(seq, 4096)
    ratios = [value / mu for mu, value in pairs]
    assert all(b >= 2 * a for a, b in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("expression", ["2*n", "n+7", "3*n"])
def test_bounded_ratios_are_refused(expression):
    with pytest.raises(AdmissibilityRefusal) as excinfo:
        SequenceService.choose_subsequence(FormulaSequence(expression=expression), 3)
    assert excinfo.value.exit_code == 2
    assert "bounded" in str(excinfo.value)


def test_table_sequence_subsequence():
    table = TableSequence(values=tuple(n * 2**n for n in range(1, 13)))
    assert SequenceService.choose_subsequence(table, 3) == [1, 2, 3]


def test_short_table_is_rejected():
    with pytest.raises(InvalidInputError):
        SequenceService.check_ratio(TableSequence(values=(1, 4, 9)), 4096)


def test_horizon_too_short_for_count():
    with pytest.raises(SubsequenceExhausted) as excinfo:
        SequenceService.choose_subsequence(FormulaSequence(expression="n**2"), 10, horizon=10)
    assert excinfo.value.exit_code == 3
