import math

import pytest

from qmirror import observer_logic as lg
from qmirror.formulas import FALSUM, Atom, Sequent, parse_formula, parse_sequent, symmetric_sequent

S = parse_sequent

CUT_TRANSCRIPT = """\
|- A    [cut]
  |- A & A^    [axiom(mirror)]
  A & A^ |- A    [&L]
    A |- A    [id]"""


def leaf(text, source="test"):
    return lg.premise_tree(S(text), source)


@pytest.mark.parametrize(
    "rule,premises,params,expected",
    [
        ("identity", [], {"F": "A"}, "A |- A"),
        ("cut", ["|- A & A^", "A & A^ |- A"], {}, "|- A"),
        ("cut", ["B |- A", "A |-"], {}, "B |-"),
        ("and_left_1", ["A |- A"], {"G": "A^"}, "A & A^ |- A"),
        ("and_left_2", ["A^ |- A^"], {"F": "A"}, "A & A^ |- A^"),
        ("and_formation", ["|- A", "|- A^"], {}, "|- A & A^"),
        ("or_formation", ["A |-", "A^ |-"], {}, "A (+) A^ |-"),
        ("falsum_def", ["|- A^"], {}, "|- A -> _|_"),
        ("modus_ponens", ["|- A", "|- A -> _|_"], {}, "|- _|_"),
        ("weakening_left", ["|- A"], {"F": "B"}, "B |- A"),
        ("weakening_right", ["A |-"], {"F": "B"}, "A |- B"),
    ],
)
def test_rule_applications(rule, premises, params, expected):
    a = lg.classical_profile()
    a = lg.ObserverProfile("all", frozenset(lg.RULES), a.ledger)
    tree = lg.apply_rule(a, rule, [leaf(p) for p in premises], **params)
    assert tree.conclusion == S(expected)
    assert lg.is_valid(tree)


@pytest.mark.parametrize(
    "rule,premises",
    [
        ("cut", ["|- A", "B |-"]),
        ("and_formation", ["A |- A", "|- A"]),
        ("modus_ponens", ["|- A", "|- B -> _|_"]),
        ("falsum_def", ["|- A"]),
        ("identity", ["|- A"]),
    ],
)
def test_mismatched_premises(rule, premises):
    prof = lg.make_profile("A")
    with pytest.raises(lg.PatternMismatch):
        lg.apply_rule(prof, rule, [leaf(p) for p in premises], F="A")


def test_missing_parameter():
    with pytest.raises(lg.PatternMismatch, match="needs parameter"):
        lg.apply_rule(lg.make_profile("G"), "identity")


def test_p_has_no_cut():
    p = lg.insider_profile()
    with pytest.raises(lg.RuleNotAvailable) as info:
        lg.apply_rule(p, "cut", [leaf("|- A & A^"), leaf("A & A^ |- A")])
    assert (info.value.profile, info.value.rule) == ("P", "cut")


def test_p_rule_set():
    assert lg.PROFILE_RULES["P"] == {"and_formation", "or_formation"}
    assert lg.PROFILE_RULES["G"] < lg.PROFILE_RULES["A"]
    assert {"falsum_def", "modus_ponens"} <= lg.PROFILE_RULES["A"] - lg.PROFILE_RULES["G"]


def test_insider_axioms():
    ledger = lg.insider_ledger()
    assert ledger.sequent("mirror") == S("|- A & A^")
    assert ledger.sequent("measurable") == S("A & A^ |- A & A^")
    assert ledger.sequent("liar") == S("A^ (+) A |-")
    assert ledger.sequent("liar_measurable") == S("A^ (+) A |- A^ (+) A")
    assert ledger.remaining("mirror") == 1
    assert math.isinf(ledger.remaining("measurable"))


def test_liar_axioms_are_symmetric_images():
    assert lg.liar_axiom() == symmetric_sequent(lg.mirror_axiom())
    assert lg.liar_measurable_axiom() == symmetric_sequent(lg.measurable_axiom())


def test_use_axiom_is_linear():
    p = lg.insider_profile()
    assert lg.use_axiom(p, "mirror").conclusion == S("|- A & A^")
    with pytest.raises(lg.AxiomExhausted):
        lg.use_axiom(p, "mirror")
    for _ in range(5):
        lg.use_axiom(p, "measurable")
    with pytest.raises(lg.UnknownAxiom):
        lg.use_axiom(p, "nope")


def test_ledger_copy_is_independent():
    ledger = lg.insider_ledger()
    dup = ledger.copy()
    ledger.consume("mirror")
    assert dup.remaining("mirror") == 1
    assert ledger.snapshot()["mirror"] == {"sequent": "|- A & A^", "remaining": 0, "initial": 1}
    assert ledger.snapshot()["measurable"]["remaining"] == "unbounded"


def test_cut_scenario_transcript():
    g = lg.quantum_profile()
    tree = lg.derive_cut_scenario(g)
    assert tree.render() == CUT_TRANSCRIPT
    assert tree.conclusion == S("|- A")
    assert tree.axioms_used() == ["mirror"]
    lg.validate(tree, lg.border_ledger(), g)
    with pytest.raises(lg.AxiomExhausted):
        lg.derive_cut_scenario(g)


def test_cut_scenario_complement():
    tree = lg.derive_cut_scenario(complement=True)
    assert tree.conclusion == S("|- A^")
    assert "A & A^ |- A^    [&L]" in tree.render()


def test_cut_scenario_refused_for_p():
    with pytest.raises(lg.RuleNotAvailable):
        lg.derive_cut_scenario(lg.insider_profile())


@pytest.mark.parametrize("allow", [False, True])
def test_cloning_demo(allow):
    out = lg.cloning_paradox_demo(allow)
    assert out.contradiction is allow
    if allow:
        assert out.conclusion.conclusion == S("|- A & A^")
        assert out.falsum.conclusion == Sequent.of(None, FALSUM)
        assert lg.is_valid(out.falsum, profile=lg.classical_profile())
        assert out.exhausted is None
    else:
        assert out.exhausted.axiom_id == "mirror"
        assert len(out.steps) == 1


def test_classical_collapse():
    a = lg.classical_profile()
    tree = lg.classical_collapse(a, [leaf("|- A"), leaf("|- A^")])
    assert tree.conclusion == S("|- _|_")
    assert [t.rule for t in (tree, tree.children[1])] == ["modus_ponens", "falsum_def"]
    # premise order does not matter
    assert lg.classical_collapse(a, [leaf("|- A^"), leaf("|- A")]).conclusion == S("|- _|_")


def test_classical_collapse_needs_a():
    with pytest.raises(lg.RuleNotAvailable):
        lg.classical_collapse(lg.make_profile("G"), [leaf("|- A"), leaf("|- A^")])


def test_classical_collapse_needs_both_judgements():
    a = lg.classical_profile()
    with pytest.raises(lg.PatternMismatch):
        lg.classical_collapse(a, [leaf("|- A")])
    with pytest.raises(lg.PatternMismatch):
        lg.classical_collapse(a, [leaf("|- A"), leaf("|- B^")])


@pytest.mark.parametrize(
    "outcome,expected",
    [(0, ["|- A (+) A^", "A & A^ |-"]), (1, ["|- A^ (+) A", "A^ & A |-"])],
)
def test_post_measurement_judgements(outcome, expected):
    assert lg.post_measurement_judgements(outcome) == [S(t) for t in expected]


def test_post_measurement_judgements_rejects_bad_outcome():
    with pytest.raises(ValueError):
        lg.post_measurement_judgements(2)


def test_p_cannot_derive_post_measurement_judgements():
    p = lg.insider_profile()
    found = lg.search(p, targets=lg.post_measurement_judgements(0) + lg.post_measurement_judgements(1))
    for outcome in (0, 1):
        for goal in lg.post_measurement_judgements(outcome):
            assert goal not in found
    assert set(found) == {e.sequent for e in p.ledger.entries.values()}


def test_g_derives_a_but_not_falsum():
    g = lg.quantum_profile()
    assert lg.derivable(g, S("|- A")) is not None
    assert lg.derivable(g, S("|- A^")) is not None
    # |- A & A^ is only available as the axiom leaf: rebuilding it from
    # |- A and |- A^ would spend the mirror axiom twice
    tree = lg.derivable(g, S("|- A & A^"))
    assert tree.rule == "axiom(mirror)"
    found = lg.search(g, targets=[S("|- _|_")])
    assert S("|- _|_") not in found


def test_a_derives_falsum_from_both_judgements():
    a = lg.classical_profile()
    tree = lg.derivable(a, S("|- _|_"), hypotheses=[S("|- A"), S("|- A^")])
    assert tree is not None and tree.depth <= 4
    assert lg.is_valid(tree, profile=a)
    assert lg.derivable(a, S("|- _|_"), hypotheses=[S("|- A")]) is None


def test_search_trees_are_valid():
    g = lg.quantum_profile()
    found = lg.search(g)
    assert found
    for tree in found.values():
        lg.validate(tree, g.ledger, g)
        assert tree.axioms_used().count("mirror") <= 1


def test_validate_rejects_tampering():
    tree = lg.derive_cut_scenario()
    bad = lg.DerivationTree(S("|- A^"), tree.rule, tree.children, tree.params)
    assert not lg.is_valid(bad)
    wrong_axiom = lg.DerivationTree(S("|- A"), "axiom(mirror)")
    assert not lg.is_valid(wrong_axiom, lg.border_ledger())
    assert not lg.is_valid(tree, profile=lg.insider_profile())


@pytest.mark.parametrize(
    "x,y,expected",
    [("A", "G", True), ("G", "A", True), ("G", "P", True), ("P", "G", True), ("A", "P", False), ("P", "A", False)],
)
def test_can_communicate(x, y, expected):
    assert lg.can_communicate(x, y) is expected


def test_communication_table():
    assert lg.communication_table() == {"A@G": True, "A@P": False, "G@P": True}
    assert not lg.can_communicate("G", "G")
    with pytest.raises(ValueError):
        lg.can_communicate("Q", "A")


def test_tree_json():
    doc = lg.derive_cut_scenario().to_json()
    assert doc["conclusion"] == "|- A"
    assert doc["children"][1]["params"] == {"G": "A^"}
    assert doc["children"][1]["children"][0] == {
        "conclusion": "A |- A",
        "rule": "identity",
        "children": [],
        "params": {"F": "A"},
    }


def test_formula_parameters_accept_objects():
    g = lg.make_profile("G")
    assert lg.apply_rule(g, "identity", F=Atom("B")) == lg.apply_rule(g, "identity", F="B")
    assert lg.apply_rule(g, "identity", F=parse_formula("A & B")).conclusion == S("A & B |- A & B")


def test_measurable_axioms_carry_transition_note():
    snap = lg.insider_ledger().snapshot()
    assert snap["measurable"]["note"] == lg.TRANSITION_NOTE
    assert snap["liar_measurable"]["note"] == lg.TRANSITION_NOTE
    assert "note" not in snap["mirror"]
