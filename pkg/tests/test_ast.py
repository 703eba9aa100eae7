from __future__ import annotations

from aara.ast import (
    App,
    Binop,
    Cond,
    Cons,
    Let,
    ListMatch,
    Nil,
    Share,
    Var,
    called_functions,
    check_linear,
    count_uses,
    free_vars,
    rename_free,
)

# match xs with [] -> [] | h :: t -> let r = f t in h :: r
body = ListMatch("xs", Nil(), "h", "t", Let(App("f", "t"), "r", Cons("h", "r")))


def test_free_vars():
    assert free_vars(body) == {"xs"}
    assert free_vars(Let(Var("a"), "a", Binop("+", "a", "b"))) == {"a", "b"}


def test_called_functions():
    assert called_functions(body) == {"f"}


def test_branches_are_alternatives():
    e = Cond("c", Var("x"), Var("x"))
    assert count_uses(e, "x") == 1
    assert check_linear(e) is None


def test_sequential_reuse_is_a_violation():
    e = Let(Var("x"), "y", Binop("+", "x", "y"))
    v = check_linear(e)
    assert v is not None and v.var == "x"
    assert str(v).startswith("variable 'x' used more than once")


def test_share_restores_linearity():
    e = Share("x", "x1", "x2", Let(Var("x1"), "y", Binop("+", "x2", "y")))
    assert check_linear(e) is None


def test_shadowed_binder_checked_separately():
    e = Let(Var("t"), "t", Binop("*", "t", "t"))
    v = check_linear(e)
    assert v is not None and v.var == "t"


def test_rename_free_respects_binders():
    renamed = rename_free(body, "t", "u")
    assert renamed == body  # t is bound by the match
    assert rename_free(body, "xs", "ys").x == "ys"
