"""Surface syntax: lexing, parsing, implicit-argument elaboration."""

import pytest

from lf2lp.frontend import (AmbiguousImplicitType, InferenceFailure, ParseError,
                            elaborate_decl, elaborate_query, elaborate_signature,
                            parse_query, parse_signature)
from lf2lp.lf import (App, Const, Context, MetaVar, Pi, Signature, Type,
                      UnboundConstant, Var, app, arrow, meta_vars, pretty)
from lf2lp.typecheck import check_kind, check_object, check_signature, check_type

from util import APPEND_SIG, INVERSION_GAP_SIG

NAT = Const("nat")
LIST = Const("list")


def test_parse_simple_arrow_declaration():
    (d,) = parse_signature("s : nat -> nat.")
    assert d.name == "s"
    assert d.classifier == arrow(NAT, NAT)


def test_parse_free_uppercase_becomes_meta():
    (d,) = parse_signature("app-nil : append nil L L.")
    assert d.classifier == app(Const("append"), Const("nil"), MetaVar("L"), MetaVar("L"))


def test_parse_query_binders_shadow_case_rule():
    q = parse_query("{x:nat} append (cons x nil) (cons z (cons x nil)) (L x)")
    assert isinstance(q, Pi)
    assert q.binder_type == NAT
    head_args = q.body
    assert App(MetaVar("L"), Var("x")) == _last_arg(head_args)


def test_parse_bound_uppercase_is_a_variable():
    q = parse_query("{L:list} append nil L L")
    assert meta_vars(q) == []


def test_arrow_is_right_associative():
    (d,) = parse_signature("f : a -> b -> c.")
    assert d.classifier == arrow(Const("a"), arrow(Const("b"), Const("c")))


def test_application_binds_tighter_than_arrow():
    (d,) = parse_signature("app-cons : append L1 L2 L3 -> append (cons X L1) L2 (cons X L3).")
    c = d.classifier
    assert isinstance(c, Pi)
    assert c.binder_type == app(Const("append"), MetaVar("L1"), MetaVar("L2"), MetaVar("L3"))


def test_comments_and_layout_are_ignored():
    decls = parse_signature("% heading\nnat : type. % a kind\n\nz : nat.")
    assert [d.name for d in decls] == ["nat", "z"]


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as e:
        parse_signature("s : nat ->.")
    assert e.value.line == 1
    assert e.value.col == 11


def test_lexer_rejects_stray_character():
    with pytest.raises(ParseError):
        parse_signature("s : nat & nat.")


def test_elaborate_app_nil(fig_sig):
    raw = parse_signature("app-nil2 : append nil L L.")[0]
    d = elaborate_decl(raw, fig_sig)
    assert d.classifier == Pi("L", LIST, app(Const("append"), Const("nil"), Var("L"), Var("L")))
    assert d.implicit == 1
    check_type(fig_sig, Context(), d.classifier, Type())


def test_elaborate_app_cons_binder_order(fig_sig):
    raw = parse_signature(
        "app-cons2 : append L1 L2 L3 -> append (cons X L1) L2 (cons X L3).")[0]
    d = elaborate_decl(raw, fig_sig)
    binders = []
    c = d.classifier
    while isinstance(c, Pi) and c.binder in ("L1", "L2", "L3", "X"):
        binders.append((c.binder, c.binder_type))
        c = c.body
    assert binders == [("L1", LIST), ("L2", LIST), ("L3", LIST), ("X", NAT)]
    assert d.implicit == 4
    check_type(fig_sig, Context(), d.classifier, Type())


def test_binder_order_matches_explicit_proof_terms(fig_sig):
    # the fully explicit inhabitant of `append [0] [] [0]` instantiates the
    # implicit binders in the order L1, L2, L3, X
    proof = app(Const("app-cons"), Const("nil"), Const("nil"), Const("nil"),
                Const("z"), App(Const("app-nil"), Const("nil")))
    goal = app(Const("append"),
               app(Const("cons"), Const("z"), Const("nil")), Const("nil"),
               app(Const("cons"), Const("z"), Const("nil")))
    check_object(fig_sig, Context(), {}, proof, goal)


def test_elaborate_no_uppercase_is_identity(fig_sig):
    raw = parse_signature("two : nat.")[0]
    d = elaborate_decl(raw, fig_sig)
    assert d.classifier == NAT
    assert d.implicit == 0


def test_elaborate_unbound_constant():
    raw = parse_signature("c : d.")[0]
    with pytest.raises(UnboundConstant):
        elaborate_decl(raw, Signature())


def test_elaborate_ambiguous_implicit(fig_sig):
    sig = fig_sig.declare("opaque", Pi("x", NAT, Type()))
    raw = parse_signature("fine : opaque Y.")[0]
    d = elaborate_decl(raw, sig)  # Y : nat is determined here
    assert d.implicit == 1
    # X applied to Y: neither occurrence pins a type
    raw2 = parse_signature("bad : opaque (X Y).")[0]
    with pytest.raises(AmbiguousImplicitType):
        elaborate_decl(raw2, sig)


def test_kind_level_binders_are_rejected(fig_sig):
    from lf2lp.lf import CategoryError
    raw = parse_signature("worse : {f:nat -> type} nat.")[0]
    with pytest.raises(CategoryError):
        elaborate_decl(raw, fig_sig)


def test_elaborate_query_ground_meta(fig_sig):
    q = elaborate_query(parse_query("append (cons z nil) nil L"), fig_sig)
    assert q.meta_types == {"L": LIST}
    check_type(fig_sig, Context(), q.query_type, Type(), q.meta_types)


def test_elaborate_query_higher_order_meta(fig_sig):
    q = elaborate_query(
        parse_query("{x:nat} append (cons x nil) (cons z (cons x nil)) (L x)"), fig_sig)
    assert q.meta_types == {"L": arrow(NAT, LIST)}


def test_elaborate_query_without_uppercase(fig_sig):
    q = elaborate_query(parse_query("append nil nil nil"), fig_sig)
    assert q.meta_types == {}


def test_query_fills_implicit_arguments(fig_sig):
    # app-nil takes one implicit list argument; a use site gets a fresh
    # meta-variable raised over the binders in scope
    sig = fig_sig.declare("holds", Pi("l", LIST,
                          Pi("p", app(Const("append"), Const("nil"), Var("l"), Var("l")),
                             Type())))
    q = elaborate_query(parse_query("holds nil (app-nil)"), sig)
    assert len(q.meta_types) == 1
    ((name, ty),) = q.meta_types.items()
    assert ty == LIST
    head, args = _spine(q.query_type)
    assert args[1] == App(Const("app-nil"), MetaVar(name))
    # static checking cannot discharge the L = nil constraint; solving it
    # is search's job, so only well-formedness is guaranteed here


def test_query_implicit_raised_over_explicit_binders(fig_sig):
    sig = fig_sig.declare("holds", Pi("l", LIST,
                          Pi("p", app(Const("append"), Const("nil"), Var("l"), Var("l")),
                             Type())))
    q = elaborate_query(parse_query("{y:list} holds y (app-nil)"), sig)
    ((name, ty),) = q.meta_types.items()
    assert ty == arrow(LIST, LIST)  # raised over {y:list}
    pi = q.query_type
    head, args = _spine(pi.body)
    assert args[1] == App(Const("app-nil"), App(MetaVar(name), Var("y")))


def test_declarations_may_not_use_implicit_constants(fig_sig):
    raw = parse_signature("lemma : append nil nil nil -> nat.")[0]
    elaborate_decl(raw, fig_sig)  # fine: append has no implicits
    raw2 = parse_signature("lemma2 : foo (app-nil) -> nat.")[0]
    sig = fig_sig.declare("foo", Pi("p", app(Const("append"), Const("nil"),
                                             Const("nil"), Const("nil")), Type()))
    with pytest.raises(InferenceFailure):
        elaborate_decl(raw2, sig)


def test_elaborated_signature_checks(fig_sig):
    check_signature(fig_sig)


def test_roundtrip_print_parse_elaborate(fig_sig):
    corpora = [fig_sig, elaborate_signature(parse_signature(INVERSION_GAP_SIG))]
    for sig in corpora:
        for d in sig:
            text = f"{d.name} : {pretty(d.classifier)}."
            (raw,) = parse_signature(text)
            prefix = _prefix_before(sig, d.name)
            again = elaborate_decl(raw, prefix)
            assert again.classifier == d.classifier, d.name


def test_implicit_count_equals_distinct_uppercase(fig_sig):
    for text in APPEND_SIG.strip().splitlines():
        text = text.strip()
        if not text or text.startswith("%"):
            continue
        (raw,) = parse_signature(text)
        prefix = _prefix_before(fig_sig, raw.name)
        d = elaborate_decl(raw, prefix)
        assert d.implicit == len(meta_vars(raw.classifier))


def _prefix_before(sig, name):
    out = Signature()
    for d in sig:
        if d.name == name:
            break
        out = out.declare(d.name, d.classifier, d.implicit)
    return out


def _spine(e):
    args = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fn
    args.reverse()
    return e, args


def _last_arg(e):
    _, args = _spine(e)
    return args[-1]
