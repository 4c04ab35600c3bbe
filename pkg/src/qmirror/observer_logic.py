"""Sequent engine for the three observers.

``P`` (insider) holds the paraconsistent axioms produced by reversible
measurements, ``G`` (external, quantum logician) can cut them away, and
``A`` (classical logician) additionally reads ``F^`` as ``F -> _|_`` and has
modus ponens.  Axioms handed across the border are linear resources: each
use decrements a counter, and using a spent axiom raises
:class:`AxiomExhausted`.  That counter is the logical face of no-cloning.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formulas import (
    FALSUM,
    Atom,
    Conj,
    Disj,
    Falsum,
    Formula,
    Implies,
    Orth,
    Sequent,
    orth,
    parse_formula,
    show,
    symmetric_sequent,
)

SEARCH_DEPTH = 4


class LogicError(Exception):
    pass


class RuleNotAvailable(LogicError):
    def __init__(self, profile: str, rule: str) -> None:
        super().__init__(f"rule {rule!r} is not available to observer {profile}")
        self.profile = profile
        self.rule = rule


class PatternMismatch(LogicError):
    pass


class AxiomExhausted(LogicError):
    def __init__(self, axiom_id: str) -> None:
        super().__init__(f"axiom {axiom_id!r} has no uses left (no-cloning)")
        self.axiom_id = axiom_id


class UnknownAxiom(LogicError):
    pass


# --------------------------------------------------------------------------
# rule schemas
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    """Formula metavariable inside a rule schema."""

    name: str


@dataclass(frozen=True)
class Side:
    """Context metavariable standing for an empty side or a single formula."""

    name: str


@dataclass(frozen=True)
class Schema:
    left: object = None
    right: object = None

    def __str__(self) -> str:
        def side(p):
            if p is None:
                return ""
            if isinstance(p, Side):
                return p.name
            return _show_pattern(p)

        lhs, rhs = side(self.left), side(self.right)
        return f"{lhs + ' ' if lhs else ''}|-{' ' + rhs if rhs else ''}"


def _show_pattern(p) -> str:
    if isinstance(p, Var):
        return p.name
    return show(_instantiate(p, {name: Atom(name) for name in _vars_of(p)}))


@dataclass(frozen=True)
class Rule:
    name: str
    label: str
    premises: tuple
    conclusion: Schema

    @property
    def arity(self) -> int:
        return len(self.premises)

    def free_params(self) -> tuple[str, ...]:
        """Metavariables of the conclusion that no premise binds."""
        bound = set()
        for s in self.premises:
            bound |= _schema_vars(s)
        return tuple(sorted(v for v in _schema_vars(self.conclusion) if v not in bound))

    def __str__(self) -> str:
        top = "   ".join(str(p) for p in self.premises)
        return f"{top} / {self.conclusion}  ({self.label})" if top else f"{self.conclusion}  ({self.label})"


F, G = Var("F"), Var("G")
GAMMA, DELTA = Side("Gamma"), Side("Delta")

RULES: dict[str, Rule] = {
    r.name: r
    for r in (
        Rule("identity", "id", (), Schema(F, F)),
        Rule("cut", "cut", (Schema(GAMMA, F), Schema(F, DELTA)), Schema(GAMMA, DELTA)),
        Rule("and_left_1", "&L", (Schema(F, DELTA),), Schema(Conj(F, G), DELTA)),
        Rule("and_left_2", "&L", (Schema(G, DELTA),), Schema(Conj(F, G), DELTA)),
        Rule("and_formation", "&", (Schema(None, F), Schema(None, G)), Schema(None, Conj(F, G))),
        Rule("or_formation", "(+)", (Schema(F, None), Schema(G, None)), Schema(Disj(F, G), None)),
        Rule("falsum_def", "def _|_", (Schema(GAMMA, Orth(F)),), Schema(GAMMA, Implies(F, FALSUM))),
        Rule("modus_ponens", "mp", (Schema(None, F), Schema(None, Implies(F, G))), Schema(None, G)),
        Rule("weakening_left", "wL", (Schema(None, DELTA),), Schema(F, DELTA)),
        Rule("weakening_right", "wR", (Schema(GAMMA, None),), Schema(GAMMA, F)),
    )
}


def _vars_of(p) -> set[str]:
    if isinstance(p, (Var, Side)):
        return {p.name}
    if isinstance(p, Orth):
        return _vars_of(p.body)
    if isinstance(p, (Conj, Disj, Implies)):
        return _vars_of(p.left) | _vars_of(p.right)
    return set()


def _schema_vars(s: Schema) -> set[str]:
    out = set()
    for p in (s.left, s.right):
        if p is not None:
            out |= _vars_of(p)
    return out


def _match(p, f, env: dict) -> Optional[dict]:
    if isinstance(p, Var):
        if p.name in env:
            return env if env[p.name] == f else None
        return {**env, p.name: f}
    if type(p) is not type(f):
        return None
    if isinstance(p, Orth):
        return _match(p.body, f.body, env)
    if isinstance(p, (Conj, Disj, Implies)):
        env = _match(p.left, f.left, env)
        return None if env is None else _match(p.right, f.right, env)
    return env if p == f else None


_EMPTY = ("empty",)


def _match_side(p, f: Optional[Formula], env: dict) -> Optional[dict]:
    if p is None:
        return env if f is None else None
    if isinstance(p, Side):
        value = _EMPTY if f is None else f
        if p.name in env:
            return env if env[p.name] == value else None
        return {**env, p.name: value}
    if f is None:
        return None
    return _match(p, f, env)


def _match_sequent(s: Schema, seq: Sequent, env: dict) -> Optional[dict]:
    env = _match_side(s.left, seq.left, env)
    return None if env is None else _match_side(s.right, seq.right, env)


def _instantiate(p, env: dict) -> Formula:
    if isinstance(p, Var):
        return env[p.name]
    if isinstance(p, Orth):
        return orth(_instantiate(p.body, env))
    if isinstance(p, (Conj, Disj, Implies)):
        return type(p)(_instantiate(p.left, env), _instantiate(p.right, env))
    return p


def _instantiate_side(p, env: dict) -> Optional[Formula]:
    if p is None:
        return None
    if isinstance(p, Side):
        value = env[p.name]
        return None if value == _EMPTY else value
    return _instantiate(p, env)


def _conclude(rule: Rule, premises: Iterable[Sequent], params: dict) -> Sequent:
    premises = tuple(premises)
    if len(premises) != rule.arity:
        raise PatternMismatch(
            f"rule {rule.name} takes {rule.arity} premise(s), got {len(premises)}"
        )
    env: dict = {}
    for k, (schema, seq) in enumerate(zip(rule.premises, premises)):
        new = _match_sequent(schema, seq, env)
        if new is None:
            raise PatternMismatch(
                f"premise {k + 1} of {rule.name}: {seq} does not match {schema}"
            )
        env = new
    for name, value in params.items():
        if name in env and env[name] != value:
            raise PatternMismatch(
                f"parameter {name}={show(value)} conflicts with premises of {rule.name}"
            )
        env[name] = value
    missing = [v for v in rule.free_params() if v not in env]
    if missing:
        raise PatternMismatch(f"rule {rule.name} needs parameter(s) {', '.join(missing)}")
    return Sequent.of(
        _instantiate_side(rule.conclusion.left, env),
        _instantiate_side(rule.conclusion.right, env),
    )


# --------------------------------------------------------------------------
# derivations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivationTree:
    conclusion: Sequent
    rule: str
    children: tuple = ()
    params: tuple = ()

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    def label(self) -> str:
        if self.rule in RULES:
            return RULES[self.rule].label
        return self.rule

    def lines(self, indent: str = "  ") -> list[str]:
        out = [f"{self.conclusion}    [{self.label()}]"]
        for child in self.children:
            out.extend(indent + line for line in child.lines(indent))
        return out

    def render(self) -> str:
        return "\n".join(self.lines())

    def to_json(self) -> dict:
        node = {
            "conclusion": str(self.conclusion),
            "rule": self.rule,
            "children": [c.to_json() for c in self.children],
        }
        if self.params:
            node["params"] = {k: show(v) for k, v in self.params}
        return node

    def axioms_used(self) -> list[str]:
        out = []
        if self.rule.startswith("axiom("):
            out.append(self.rule[6:-1])
        for c in self.children:
            out.extend(c.axioms_used())
        return out

    def iter_conclusions(self):
        yield self.conclusion
        for c in self.children:
            yield from c.iter_conclusions()


def _axiom_rule(axiom_id: str) -> str:
    return f"axiom({axiom_id})"


def premise_tree(sequent: Sequent, source: str) -> DerivationTree:
    """A judgement received from another observer, used as an open leaf."""
    return DerivationTree(sequent, f"premise({source})")


# --------------------------------------------------------------------------
# ledgers and profiles
# --------------------------------------------------------------------------


@dataclass
class LedgerEntry:
    sequent: Sequent
    remaining: float
    initial: float
    note: Optional[str] = None

    @property
    def linear(self) -> bool:
        return math.isfinite(self.initial)


class AxiomLedger:
    """Axioms and their remaining uses; ``math.inf`` marks a reusable axiom.

    Mutated only through :meth:`consume`; callers sharing a ledger across
    threads must serialize access themselves.
    """

    def __init__(self, entries: Optional[dict] = None) -> None:
        self.entries: dict[str, LedgerEntry] = {}
        for axiom_id, (seq, uses, *note) in (entries or {}).items():
            self.add(axiom_id, seq, uses, *note)

    def add(self, axiom_id: str, sequent: Sequent, uses: float, note: Optional[str] = None) -> None:
        if uses < 0:
            raise ValueError("uses must be non-negative")
        self.entries[axiom_id] = LedgerEntry(sequent, uses, uses, note)

    def __contains__(self, axiom_id: str) -> bool:
        return axiom_id in self.entries

    def sequent(self, axiom_id: str) -> Sequent:
        try:
            return self.entries[axiom_id].sequent
        except KeyError:
            raise UnknownAxiom(f"no axiom {axiom_id!r} in ledger") from None

    def remaining(self, axiom_id: str) -> float:
        self.sequent(axiom_id)
        return self.entries[axiom_id].remaining

    def consume(self, axiom_id: str) -> Sequent:
        seq = self.sequent(axiom_id)
        entry = self.entries[axiom_id]
        if entry.remaining < 1:
            raise AxiomExhausted(axiom_id)
        entry.remaining -= 1
        return seq

    def copy(self) -> AxiomLedger:
        new = AxiomLedger()
        for axiom_id, e in self.entries.items():
            new.entries[axiom_id] = LedgerEntry(e.sequent, e.remaining, e.initial, e.note)
        return new

    def snapshot(self) -> dict:
        def fmt(x):
            return "unbounded" if math.isinf(x) else int(x)

        out = {}
        for axiom_id, e in self.entries.items():
            out[axiom_id] = {"sequent": str(e.sequent), "remaining": fmt(e.remaining), "initial": fmt(e.initial)}
            if e.note:
                out[axiom_id]["note"] = e.note
        return out


def mirror_axiom(atom: str = "A") -> Sequent:
    a = Atom(atom)
    return Sequent.of(None, Conj(a, orth(a)))


def measurable_axiom(atom: str = "A") -> Sequent:
    a = Atom(atom)
    return Sequent.of(Conj(a, orth(a)), Conj(a, orth(a)))


def liar_axiom(atom: str = "A") -> Sequent:
    return symmetric_sequent(mirror_axiom(atom))


def liar_measurable_axiom(atom: str = "A") -> Sequent:
    return symmetric_sequent(measurable_axiom(atom))


# annotation printed next to the identity-shaped axioms: the turnstile is
# read as a transition by a diagonal unitary
TRANSITION_NOTE = "transition via U2^D"

P_RULES = frozenset({"and_formation", "or_formation"})
G_RULES = frozenset(
    {"identity", "cut", "and_left_1", "and_left_2", "and_formation", "or_formation"}
)
A_RULES = G_RULES | {"falsum_def", "modus_ponens", "weakening_left", "weakening_right"}
PROFILE_RULES = {"P": P_RULES, "G": G_RULES, "A": A_RULES}


@dataclass
class ObserverProfile:
    name: str
    rules: frozenset
    ledger: AxiomLedger = field(default_factory=AxiomLedger)

    def has(self, rule: str) -> bool:
        return rule in self.rules


def insider_ledger(atom: str = "A", *, allow_cloning: bool = False, liar_once: bool = True) -> AxiomLedger:
    once = math.inf if allow_cloning else 1
    return AxiomLedger(
        {
            "mirror": (mirror_axiom(atom), once),
            "measurable": (measurable_axiom(atom), math.inf, TRANSITION_NOTE),
            "liar": (liar_axiom(atom), once if liar_once else math.inf),
            "liar_measurable": (liar_measurable_axiom(atom), math.inf, TRANSITION_NOTE),
        }
    )


def border_ledger(atom: str = "A", *, allow_cloning: bool = False) -> AxiomLedger:
    """What crosses the border from P to G: the mirror axiom, once."""
    return AxiomLedger({"mirror": (mirror_axiom(atom), math.inf if allow_cloning else 1)})


def make_profile(name: str, ledger: Optional[AxiomLedger] = None) -> ObserverProfile:
    if name not in PROFILE_RULES:
        raise ValueError(f"unknown observer {name!r}; expected one of P, G, A")
    return ObserverProfile(name, PROFILE_RULES[name], ledger if ledger is not None else AxiomLedger())


def insider_profile(atom: str = "A", **kw) -> ObserverProfile:
    return make_profile("P", insider_ledger(atom, **kw))


def quantum_profile(atom: str = "A", *, allow_cloning: bool = False) -> ObserverProfile:
    return make_profile("G", border_ledger(atom, allow_cloning=allow_cloning))


def classical_profile() -> ObserverProfile:
    return make_profile("A")


# --------------------------------------------------------------------------
# engine operations
# --------------------------------------------------------------------------


def _as_formula(value) -> Formula:
    return parse_formula(value) if isinstance(value, str) else value


def apply_rule(
    profile: ObserverProfile, rule: str, premises: Iterable[DerivationTree] = (), **params
) -> DerivationTree:
    if rule not in RULES:
        raise PatternMismatch(f"unknown rule {rule!r}")
    if not profile.has(rule):
        raise RuleNotAvailable(profile.name, rule)
    premises = tuple(premises)
    params = {k: _as_formula(v) for k, v in params.items()}
    conclusion = _conclude(RULES[rule], (p.conclusion for p in premises), params)
    kept = tuple(sorted((k, v) for k, v in params.items() if k in RULES[rule].free_params()))
    return DerivationTree(conclusion, rule, premises, kept)


def use_axiom(profile: ObserverProfile, axiom_id: str) -> DerivationTree:
    return DerivationTree(profile.ledger.consume(axiom_id), _axiom_rule(axiom_id))


def validate(tree: DerivationTree, ledger: Optional[AxiomLedger] = None, profile: Optional[ObserverProfile] = None) -> None:
    """Recheck every node; raises :class:`PatternMismatch` on the first bad one.

    Axiom leaves are checked against ``ledger`` (uses are not consumed);
    ``premise(...)`` leaves are accepted as open assumptions.
    """
    if tree.rule.startswith("premise("):
        if tree.children:
            raise PatternMismatch("premise leaves have no children")
        return
    if tree.rule.startswith("axiom("):
        if tree.children:
            raise PatternMismatch("axiom leaves have no children")
        if ledger is not None and ledger.sequent(tree.rule[6:-1]) != tree.conclusion:
            raise PatternMismatch(f"{tree.conclusion} is not axiom {tree.rule}")
        return
    if tree.rule not in RULES:
        raise PatternMismatch(f"unknown rule {tree.rule!r}")
    if profile is not None and not profile.has(tree.rule):
        raise RuleNotAvailable(profile.name, tree.rule)
    for child in tree.children:
        validate(child, ledger, profile)
    expected = _conclude(RULES[tree.rule], (c.conclusion for c in tree.children), dict(tree.params))
    if expected != tree.conclusion:
        raise PatternMismatch(f"node {tree.conclusion} should read {expected} under {tree.rule}")


def is_valid(tree: DerivationTree, ledger: Optional[AxiomLedger] = None, profile: Optional[ObserverProfile] = None) -> bool:
    try:
        validate(tree, ledger, profile)
    except LogicError:
        return False
    return True


def derive_cut_scenario(
    profile: Optional[ObserverProfile] = None, *, complement: bool = False, atom: str = "A"
) -> DerivationTree:
    """G drops the mirror axiom by cut, keeping ``A`` (or ``A^``).

    ::

        |- A & A^     A |- A
                    ---------- &L
                    A & A^ |- A
        ------------------------ cut
                 |- A
    """
    profile = profile if profile is not None else quantum_profile(atom)
    a = Atom(atom)
    left = use_axiom(profile, "mirror")
    if complement:
        ident = apply_rule(profile, "identity", F=orth(a))
        weakened = apply_rule(profile, "and_left_2", [ident], F=a)
    else:
        ident = apply_rule(profile, "identity", F=a)
        weakened = apply_rule(profile, "and_left_1", [ident], G=orth(a))
    return apply_rule(profile, "cut", [left, weakened])


def classical_collapse(profile: ObserverProfile, premises: Iterable[DerivationTree]) -> DerivationTree:
    """Rewrite ``F^`` as ``F -> _|_`` and close with modus ponens."""
    for rule in ("falsum_def", "modus_ponens"):
        if not profile.has(rule):
            raise RuleNotAvailable(profile.name, rule)
    premises = tuple(premises)
    if len(premises) != 2:
        raise PatternMismatch(f"need the two judgements |- F and |- F^, got {len(premises)}")
    first, second = premises
    if not isinstance(second.conclusion.right, Orth):
        first, second = second, first
    rewritten = apply_rule(profile, "falsum_def", [second])
    return apply_rule(profile, "modus_ponens", [first, rewritten])


@dataclass
class CloningOutcome:
    allow_cloning: bool
    steps: list = field(default_factory=list)
    conclusion: Optional[DerivationTree] = None
    exhausted: Optional[AxiomExhausted] = None
    falsum: Optional[DerivationTree] = None

    @property
    def contradiction(self) -> bool:
        return self.conclusion is not None


def cloning_paradox_demo(allow_cloning: bool, atom: str = "A") -> CloningOutcome:
    """Try to derive ``|- A & A^`` by running the cut scenario twice.

    With cloning the mirror axiom is reusable and G rebuilds it; A then
    reaches ``_|_``.  Without it the second cut halts on the spent axiom.
    """
    g = quantum_profile(atom, allow_cloning=allow_cloning)
    out = CloningOutcome(allow_cloning)
    out.steps.append(derive_cut_scenario(g, atom=atom))
    try:
        out.steps.append(derive_cut_scenario(g, complement=True, atom=atom))
    except AxiomExhausted as exc:
        out.exhausted = exc
        return out
    out.conclusion = apply_rule(g, "and_formation", out.steps[:2])
    out.falsum = hand_to_classical(out.conclusion, atom=atom)
    return out


def hand_to_classical(judgement: DerivationTree, atom: str = "A") -> DerivationTree:
    """A receives ``|- A & A^`` from G, splits it by cut and collapses."""
    a_prof = classical_profile()
    a = Atom(atom)
    received = premise_tree(judgement.conclusion, "G")
    pos = apply_rule(
        a_prof,
        "cut",
        [received, apply_rule(a_prof, "and_left_1", [apply_rule(a_prof, "identity", F=a)], G=orth(a))],
    )
    neg = apply_rule(
        a_prof,
        "cut",
        [received, apply_rule(a_prof, "and_left_2", [apply_rule(a_prof, "identity", F=orth(a))], F=a)],
    )
    return classical_collapse(a_prof, [pos, neg])


def post_measurement_judgements(outcome: int, atom: str = "A") -> list[Sequent]:
    """G's empirical excluded-middle and non-contradiction instances."""
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    a = Atom(atom)
    first, second = (a, orth(a)) if outcome == 0 else (orth(a), a)
    return [Sequent.of(None, Disj(first, second)), Sequent.of(Conj(first, second), None)]


_COMMUNICATE = {frozenset("AG"), frozenset("GP")}


def can_communicate(x: str, y: str) -> bool:
    for obs in (x, y):
        if obs not in PROFILE_RULES:
            raise ValueError(f"unknown observer {obs!r}")
    return frozenset((x, y)) in _COMMUNICATE


def communication_table() -> dict[str, bool]:
    return {f"{x}@{y}": can_communicate(x, y) for x, y in itertools.combinations("AGP", 2)}


# --------------------------------------------------------------------------
# bounded proof search
# --------------------------------------------------------------------------


def _atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Orth):
        return _atoms(f.body)
    if isinstance(f, (Conj, Disj, Implies)):
        return _atoms(f.left) | _atoms(f.right)
    return set()


def _subformulas(f: Formula) -> set:
    out = {f}
    if isinstance(f, Orth):
        out |= _subformulas(f.body)
    elif isinstance(f, (Conj, Disj, Implies)):
        out |= _subformulas(f.left) | _subformulas(f.right)
    return out


def search_universe(sequents: Iterable[Sequent], atoms: Iterable[str] = ("A",)) -> frozenset:
    """Formulas the search may mention.

    Literals ``X, X^`` of every atom, ``_|_``, all binary ``&``/``(+)`` of two
    literals, ``L -> _|_`` for each literal, and all subformulas of the given
    sequents.
    """
    atoms = set(atoms)
    sequents = list(sequents)
    for s in sequents:
        for f in s.formulas():
            atoms |= _atoms(f)
    lits = [x for name in sorted(atoms) for x in (Atom(name), Orth(Atom(name)))]
    universe = set(lits) | {FALSUM}
    for p, q in itertools.product(lits, repeat=2):
        universe |= {Conj(p, q), Disj(p, q)}
    universe |= {Implies(p, FALSUM) for p in lits}
    for s in sequents:
        for f in s.formulas():
            universe |= _subformulas(f)
    return frozenset(universe)


@dataclass(frozen=True)
class _Node:
    sequent: Sequent
    usage: tuple
    tree: DerivationTree


def search(
    profile: ObserverProfile,
    depth: int = SEARCH_DEPTH,
    *,
    hypotheses: Iterable[Sequent] = (),
    targets: Iterable[Sequent] = (),
    universe: Optional[frozenset] = None,
) -> dict[Sequent, DerivationTree]:
    """Every sequent derivable by ``profile`` with trees of at most ``depth`` nodes
    on any root-to-leaf path.

    Linear axioms are tracked per derivation: a tree may use each axiom at most
    as often as the ledger still allows.  The ledger itself is not consumed.
    Returned trees are of minimal depth.
    """
    hypotheses, targets = tuple(hypotheses), tuple(targets)
    ledger = profile.ledger
    linear = [k for k, e in ledger.entries.items() if math.isfinite(e.remaining)]
    caps = tuple(int(ledger.entries[k].remaining) for k in linear)
    if universe is None:
        universe = search_universe(
            [e.sequent for e in ledger.entries.values()] + list(hypotheses) + list(targets)
        )
    zero = (0,) * len(linear)

    levels: list[list[_Node]] = [[]]
    best: dict[Sequent, list[tuple]] = {}

    def admit(node: _Node, bucket: list) -> None:
        if any(f not in universe for f in node.sequent.formulas()):
            return
        seen = best.setdefault(node.sequent, [])
        if any(all(o <= n for o, n in zip(old, node.usage)) for old in seen):
            return
        seen.append(node.usage)
        bucket.append(node)

    first: list[_Node] = []
    for axiom_id, entry in ledger.entries.items():
        if entry.remaining < 1:
            continue
        usage = tuple(1 if k == axiom_id else 0 for k in linear)
        admit(_Node(entry.sequent, usage, DerivationTree(entry.sequent, _axiom_rule(axiom_id))), first)
    for h in hypotheses:
        admit(_Node(h, zero, premise_tree(h, "hypothesis")), first)
    rules = [RULES[r] for r in sorted(profile.rules)]
    ordered_universe = sorted(universe, key=show)
    for rule in rules:
        if rule.arity == 0:
            for values in itertools.product(ordered_universe, repeat=len(rule.free_params())):
                params = dict(zip(rule.free_params(), values))
                seq = _conclude(rule, (), params)
                admit(_Node(seq, zero, DerivationTree(seq, rule.name, (), tuple(sorted(params.items())))), first)
    levels.append(first)

    for d in range(2, depth + 1):
        older = [n for lvl in levels[:-1] for n in lvl]
        newest = levels[-1]
        pool = older + newest
        by_left: dict = {}
        by_right: dict = {}
        for n in pool:
            by_left.setdefault(n.sequent.left, []).append(n)
            by_right.setdefault(n.sequent.right, []).append(n)
        newest_ids = {id(n) for n in newest}
        fresh: list[_Node] = []
        for rule in rules:
            if rule.arity == 0:
                continue
            free = rule.free_params()
            for combo, env in _premise_combos(rule, pool, by_left, by_right):
                if not any(id(n) in newest_ids for n in combo):
                    continue
                usage = tuple(sum(col) for col in zip(*(n.usage for n in combo))) if linear else ()
                if any(u > c for u, c in zip(usage, caps)):
                    continue
                for values in itertools.product(ordered_universe, repeat=len(free)):
                    params = dict(zip(free, values))
                    full = {**env, **params}
                    seq = Sequent.of(
                        _instantiate_side(rule.conclusion.left, full),
                        _instantiate_side(rule.conclusion.right, full),
                    )
                    tree = DerivationTree(seq, rule.name, tuple(n.tree for n in combo), tuple(sorted(params.items())))
                    admit(_Node(seq, usage, tree), fresh)
        levels.append(fresh)

    results: dict[Sequent, DerivationTree] = {}
    for lvl in levels:
        for n in lvl:
            results.setdefault(n.sequent, n.tree)
    return results


def _premise_combos(rule: Rule, pool, by_left, by_right):
    def extend(k: int, env: dict, chosen: tuple):
        if k == rule.arity:
            yield chosen, env
            return
        schema = rule.premises[k]
        candidates = pool
        for side, index in ((schema.left, by_left), (schema.right, by_right)):
            if side is None:
                candidates = index.get(None, [])
                break
            if not isinstance(side, Side) and _vars_of(side) <= env.keys():
                candidates = index.get(_instantiate(side, env), [])
                break
        for n in candidates:
            new = _match_sequent(schema, n.sequent, env)
            if new is not None:
                yield from extend(k + 1, new, chosen + (n,))

    yield from extend(0, {}, ())


def derivable(profile: ObserverProfile, goal: Sequent, depth: int = SEARCH_DEPTH, **kw) -> Optional[DerivationTree]:
    found = search(profile, depth, targets=[goal], **kw)
    return found.get(goal)
