from __future__ import annotations

import json
import math
from fractions import Fraction

from supersat.catalog import clique_minus_edge, complete, cycle, fig2, kst_plus
from supersat.graph import Graph
from supersat.report import build_report, fmt_number, known_values, recognise, report_document, to_json, to_text


def test_number_formatting():
    assert fmt_number(Fraction(3, 8)) == "3/8"
    assert fmt_number(Fraction(4, 2)) == "2"
    assert fmt_number(math.inf) == "inf"
    assert fmt_number(0.1 + 0.2) == "0.3"
    assert fmt_number(1 / 3) == "0.333333333333"
    assert fmt_number(True) is True and fmt_number(None) is None and fmt_number(7) == 7


def test_recognise_relabelled_patterns():
    g = clique_minus_edge(2).relabel([3, 2, 1, 0])
    assert recognise(g) == ("clique-minus-edge", {"r": 2})
    assert recognise(cycle(7)) == ("odd-cycle", {"k": 3})
    assert recognise(kst_plus(3, 4)) == ("kst-plus", {"s": 3, "t": 4})
    assert recognise(fig2()) == ("pair-example", {})
    assert recognise(Graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])) is None


def test_k4e_report():
    g = clique_minus_edge(2)
    rep, th, _ = build_report(g)
    assert (rep.alpha, rep.zeta, rep.pi) == (Fraction(1, 8), Fraction(1, 2), Fraction(1, 4))
    assert math.isinf(rep.rho) and math.isinf(rep.rho_hat)
    assert not rep.pair_free
    assert all(kv.match for kv in known_values(rep, g))


def test_c5_report_warns_about_counting_convention():
    g = cycle(5)
    rep, _, _ = build_report(g)
    assert rep.degP == 2 and rep.c1_lower == Fraction(1, 2)
    doc = report_document(g, rep)
    assert any("convention" in w for w in doc["warnings"])


def test_kst34_known_values_match():
    g = kst_plus(3, 4)
    rep, _, _ = build_report(g)
    kv = known_values(rep, g)
    assert kv and all(k.match for k in kv)
    assert abs(rep.c2 - (rep.rho_hat - 0.5)) < 1e-15


def test_json_is_deterministic_and_round_trips():
    g = fig2()
    rep, _, _ = build_report(g)
    a = to_json(report_document(g, rep))
    b = to_json(report_document(g, build_report(g)[0]))
    assert a == b
    assert to_json(json.loads(a)) == a
    doc = json.loads(a)
    assert doc["parameters"]["alpha"] == "1/192"
    assert doc["parameters"]["rho"] == "inf"
    assert list(doc) == sorted(doc)


def test_text_output_lists_all_parameters():
    g = complete(3)
    rep, _, _ = build_report(g)
    doc = report_document(g, rep)
    text = to_text(doc)
    for key in ("alpha", "zeta", "pi", "degP", "rho_hat", "c1_lower", "beta"):
        assert f"  {key} " in text
    assert "MISMATCH" not in text
