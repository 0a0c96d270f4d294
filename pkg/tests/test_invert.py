"""The type-directed inverse encoding, including its failure cases."""

import random

import pytest

from lf2lp import hh
from lf2lp.frontend import elaborate_signature, parse_signature
from lf2lp.invert import InvContext, NotInvertible, invert_check, invert_substitution, invert_synth
from lf2lp.lf import Const, Context, Lam, MetaVar, Pi, Var, app, arrow
from lf2lp.translate import Mode, encode_term
from lf2lp.typecheck import check_object

from util import INVERSION_GAP_SIG, append_type, inhabitants_upto, list_term, nat_term

NAT = Const("nat")
LIST = Const("list")
NATT = hh.TAtom("nat-type")
LISTT = hh.TAtom("list-type")


def _theta(sig, meta=None):
    return InvContext(sig, meta=dict(meta or {}))


def test_invert_first_order_synthesis(fig_sig):
    t = encode_term(list_term([0]), Mode.OPTIMIZED, fig_sig)
    m, a = invert_synth(t, _theta(fig_sig))
    assert m == list_term([0])
    assert a == LIST


def test_invert_constant_synthesizes_declared_type(fig_sig):
    m, a = invert_synth(hh.Const("z", NATT), _theta(fig_sig))
    assert (m, a) == (Const("z"), NAT)


def test_invert_dependent_application(fig_sig):
    t = hh.App(hh.Const("app-nil", hh.arrow(LISTT, hh.TAtom("append-type"))),
               hh.Const("nil", LISTT))
    m, a = invert_synth(t, _theta(fig_sig))
    assert m == app(Const("app-nil"), Const("nil"))
    assert a == append_type([], [], [])


def test_invert_abstraction_takes_binder_type_from_product(fig_sig):
    c = app(Const("cons"), Var("y"), Const("nil"))
    t = encode_term(Lam("y", NAT, c), Mode.OPTIMIZED, fig_sig)
    got = invert_check(t, Pi("y", NAT, LIST), _theta(fig_sig))
    assert got == Lam("y", NAT, c)
    check_object(fig_sig, Context(), {}, got, arrow(NAT, LIST))


def test_invert_higher_order_answer(fig_sig):
    inner = app(Const("cons"), Var("y"), app(Const("cons"), Const("z"),
                app(Const("cons"), Var("y"), Const("nil"))))
    t = encode_term(Lam("y", NAT, inner), Mode.OPTIMIZED, fig_sig)
    got = invert_check(t, arrow(NAT, LIST), _theta(fig_sig))
    assert got == Lam("y", NAT, inner)


def test_invert_meta_variable_uses_delta(fig_sig):
    x = hh.LogicVar("X", NATT, 0)
    m, a = invert_synth(x, _theta(fig_sig, {"X": NAT}))
    assert (m, a) == (MetaVar("X"), NAT)


def test_unknown_variable_recorded_in_checking_position(fig_sig):
    th = _theta(fig_sig)
    got = invert_check(hh.LogicVar("Y", LISTT, 0), LIST, th)
    assert got == MetaVar("Y")
    assert th.meta["Y"] == LIST
    # and refuses when disallowed
    th2 = _theta(fig_sig)
    th2.allow_fresh_meta = False
    with pytest.raises(NotInvertible):
        invert_check(hh.LogicVar("Y", LISTT, 0), LIST, th2)


def test_simply_typed_image_gap_is_rejected():
    sig = elaborate_signature(parse_signature(INVERSION_GAP_SIG))
    a = hh.Const("a", hh.arrow(hh.LF_OBJ, hh.LF_OBJ))
    c = hh.Const("c", hh.LF_OBJ)
    bad = hh.App(a, hh.App(a, c))  # well typed here, no LF original
    with pytest.raises(NotInvertible):
        invert_check(bad, Const("j"), _theta(sig))
    with pytest.raises(NotInvertible):
        invert_synth(bad, _theta(sig))


def test_type_mismatch_is_rejected(fig_sig):
    with pytest.raises(NotInvertible):
        invert_check(hh.Const("z", NATT), LIST, _theta(fig_sig))


def test_unknown_constant_is_rejected(fig_sig):
    with pytest.raises(NotInvertible):
        invert_synth(hh.Const("mystery", NATT), _theta(fig_sig))


def test_invert_substitution_pointwise(fig_sig):
    t = encode_term(list_term([0]), Mode.OPTIMIZED, fig_sig)
    got = invert_substitution({"L": t}, {"L": LIST}, fig_sig)
    assert got == {"L": list_term([0])}


def test_invert_substitution_skips_foreign_names(fig_sig):
    t = encode_term(list_term([0]), Mode.OPTIMIZED, fig_sig)
    got = invert_substitution({"L": t, "internal": t}, {"L": LIST}, fig_sig)
    assert set(got) == {"L"}


def test_invert_empty_substitution(fig_sig):
    assert invert_substitution({}, {}, fig_sig) == {}


def test_invert_substitution_names_offender(fig_sig):
    with pytest.raises(NotInvertible) as e:
        invert_substitution({"L": hh.Const("z", NATT)}, {"L": LIST}, fig_sig)
    assert "L" in str(e.value)


def test_inversion_is_deterministic(fig_sig):
    t = encode_term(list_term([2, 1]), Mode.OPTIMIZED, fig_sig)
    a = invert_check(t, LIST, _theta(fig_sig))
    b = invert_check(t, LIST, _theta(fig_sig))
    assert a == b


@pytest.mark.parametrize("mode", [Mode.NAIVE, Mode.OPTIMIZED])
def test_roundtrip_on_enumerated_objects(fig_sig, mode):
    for a in (NAT, LIST, append_type([0], [], [0]), append_type([], [0], [0])):
        for m in inhabitants_upto(fig_sig, a, 8):
            t = hh.hh_normalize(encode_term(m, mode, fig_sig))
            assert invert_check(t, a, _theta(fig_sig)) == m


def test_roundtrip_on_random_sample(fig_sig):
    rng = random.Random(5)
    pool = []
    families = [NAT, LIST, append_type([0], [], [0]), append_type([], [0, 1], [0, 1]),
                append_type([1], [0], [1, 0])]
    for a in families:
        pool += [(m, a) for m in inhabitants_upto(fig_sig, a, 8)]
    assert len(pool) >= 30
    for m, a in rng.choices(pool, k=60):
        t = hh.hh_normalize(encode_term(m, Mode.OPTIMIZED, fig_sig))
        assert invert_check(t, a, _theta(fig_sig)) == m
