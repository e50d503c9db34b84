from pathlib import Path

import pytest

from coringkit.comodule import Bicomodule
from coringkit.coring import Coring
from coringkit.instance import InstanceError, parse_instance, parse_matrix, parse_number, parse_text
from coringkit.linalg import GF, QQ

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

MATRIX2 = """\
field rationals
coring C = matrix(2)
bimodule V dim=2
comodule L module=V right=C:
  rho: 1 0 ; 0 1 ; 0 0 ; 0 0 ; 0 0 ; 0 0 ; 1 0 ; 0 1
end
"""


def error_line(text, field=None):
    with pytest.raises(InstanceError) as exc:
        parse_text(text, field=field)
    return exc.value.line, str(exc.value)


def test_trivial_coring_over_rationals():
    ws = parse_text("field rationals\nalgebra k = ground()\ncoring T = trivial(k)\n")
    assert ws.names("coring") == ["T"]
    assert isinstance(ws.get("T"), Coring)
    assert ws.field == QQ


def test_matrix_coalgebra_with_its_simple_comodule():
    ws = parse_text(MATRIX2)
    assert ws.names("coring") == ["C"] and ws.names("comodule") == ["L"]
    lam = ws.get("L", "comodule")
    assert isinstance(lam, Bicomodule) and lam.right is ws.get("C")


@pytest.mark.parametrize("path", sorted(INSTANCES.glob("*.cri")), ids=lambda p: p.name)
def test_shipped_instances_parse(path):
    ws = parse_instance(path)
    assert len(ws) > 0


def test_field_override():
    ws = parse_text(MATRIX2, field=GF(5))
    assert ws.field == GF(5)
    assert ws.get("C").field == GF(5)


def test_numbers():
    assert QQ(parse_number("-3/6", 1)) == QQ("-1/2")
    with pytest.raises(InstanceError):
        parse_number("1.5", 7)
    assert parse_matrix("1 2 ; 3 4", QQ, 1).rows == ((1, 2), (3, 4))
    assert parse_matrix("1/2 1", GF(5), 1).rows == ((3, 1),)
    assert parse_matrix("(empty)", QQ, 1, ncols=2).shape == (0, 2)
    with pytest.raises(InstanceError):
        parse_matrix("1 2 ; 3", QQ, 1)


@pytest.mark.parametrize("text,line,fragment", [
    ("field rationals\ncoring T = trivial(k)\n", 2, "undeclared name 'k'"),
    ("field rationals\nalgebra k = ground()\nalgebra k = ground()\n", 3, "already declared"),
    ("field rationals\nfield gf:5\n", 2, "field must be declared once"),
    ("algebra k = ground()\nfield rationals\n", 2, "field must be declared once"),
    ("field rationals\nwidget W = thing()\n", 2, "unknown declaration kind"),
    ("field rationals\ncoring C = matrix(2, 3)\n", 2, "takes 1 argument"),
    ("field rationals\ncoring C = nope(2)\n", 2, "unknown builder"),
    ("field rationals\nthis is not a declaration\n", 2, "cannot parse"),
    ("field rationals\nbimodule V dim=x\n", 2, "expected an integer"),
    ("field gf:4\n", 1, "prime"),
    ("field rationals\nalgebra k = ground()\nalgebra A dim=1:\n  mu: 1\n", 3, "not closed"),
    ("field rationals\nalgebra A dim=1:\n  mu: 1\n  mu: 1\nend\n", 4, "duplicate key"),
    ("field rationals\nalgebra A dim=1:\n  mu: 1/0\n  unit: 1\nend\n", 3, "zero denominator"),
    ("field rationals\nalgebra A dim=1:\n  mu: 2\n  unit: 1\nend\n", 2, "validation failed"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    got_line, message = error_line(text)
    assert got_line == line
    assert fragment in message
    assert message.startswith(f"line {line}: ")


def test_invalid_coaction_is_rejected_at_its_line():
    bad = MATRIX2.replace("1 0 ; 0 1 ; 0 0 ; 0 0 ; 0 0 ; 0 0 ; 1 0 ; 0 1",
                          "1 0 ; 0 1 ; 0 0 ; 0 0 ; 0 0 ; 0 0 ; 1 0 ; 0 0")
    line, message = error_line(bad)
    assert line == 4
    assert "counit" in message or "coassociativity" in message


def test_wrong_kind_reference():
    text = "field rationals\nalgebra k = ground()\ncomodule R = regular(k)\n"
    line, message = error_line(text)
    assert line == 3 and "expected coring" in message


def test_missing_file():
    with pytest.raises(InstanceError):
        parse_instance(INSTANCES / "does_not_exist.cri")


def test_comments_and_blank_lines_are_ignored():
    ws = parse_text("# header\n\nfield rationals   # trailing\n\ncoring C = grouplike(2)\n")
    assert ws.get("C").dim == 2
