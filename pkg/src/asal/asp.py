"""Export of the automaton-learning task as an ASP program (clingo syntax).

States are numbered ``1..N`` in the program (``q0`` is ``1``), so a model fact
``transition(q0,g,q1)`` appears as ``transition(1,g,2)``.
"""
from __future__ import annotations

import re

from .automaton import Acceptance, Asa, Policy, Semantics
from .core import Dataset
from .guards import KINDS, normalize_kinds
from .objective import ObjectiveConfig, StructuralConfig

_IDENT = re.compile(r"^[a-z][A-Za-z0-9_]*$")
_INT = re.compile(r"^-?\d+$")

FEATURE_TYPES = {
    "eq": "feature(eq(A,V)) :- att(A), val(V).",
    "neg": "feature(neg(A,V)) :- att(A), val(V).",
    "lt": "feature(lt(A1,A2)) :- att(A1), att(A2), A1 != A2.",
    "at_least": "feature(at_least(A,V)) :- att(A), val(V).",
    "at_most": "feature(at_most(A,V)) :- att(A), val(V).",
}

FEATURE_DEFS = {
    "eq": "satisfies(SeqId,eq(A,V),T) :- obs(SeqId,av(A,V),T).",
    "neg": "satisfies(SeqId,neg(A,V),T) :- obs(SeqId,av(A,V1),T), val(V), V1 != V.",
    "lt": ("satisfies(SeqId,lt(A1,A2),T) :- obs(SeqId,av(A1,V1),T), obs(SeqId,av(A2,V2),T), "
           "rank(V1,R1), rank(V2,R2), R1 < R2."),
    "at_least": ("satisfies(SeqId,at_least(A,V),T) :- obs(SeqId,av(A,V1),T), val(V), "
                 "rank(V1,R1), rank(V,R), R1 >= R."),
    "at_most": ("satisfies(SeqId,at_most(A,V),T) :- obs(SeqId,av(A,V1),T), val(V), "
                "rank(V1,R1), rank(V,R), R1 <= R."),
}


def term(text: str) -> str:
    """Render a name as an ASP constant, quoting it when it is not a plain identifier."""
    text = str(text)
    if _IDENT.match(text) or _INT.match(text):
        return text
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def guard_term(g) -> str:
    return f"{g.kind}({term(g.args[0])},{term(g.args[1])})"


def export_asp(dataset: Dataset, structural: StructuralConfig = StructuralConfig(),
               objective: ObjectiveConfig = ObjectiveConfig(), semantics: Semantics = Semantics(),
               kinds="symbolic", full_alphabet: bool = False, incumbent: Asa | None = None,
               weights: dict | None = None) -> str:
    """Render the learning task for ``dataset`` as a clingo program.

    With ``incumbent``, the program becomes a revision task: each existing fact
    is declared and its removal costs ``-w_i`` (transitions, ``w_i = n - p``
    from ``weights`` or from guard statistics on ``dataset``) or 1 (accepting).
    """
    kinds = normalize_kinds(kinds)
    objective = objective.resolve(dataset)
    alphabet = dataset.alphabet if full_alphabet else dataset.observed_symbols()
    out = []
    emit = out.append

    emit("% Generate ASA:")
    emit("{transition(S1,F,S2)} :- state(S1), state(S2), feature(F).")
    for kind in KINDS:
        if kind in kinds:
            emit(FEATURE_TYPES[kind])
    emit("{state(S)} :- maxStates(S).")
    emit("state(S) :- start(S).")
    emit("{accepting(S)} :- state(S).")
    emit(f"maxStates(1..{structural.max_states}). start(1).")
    emit("")

    emit("% Minimize the training error:")
    emit(f"#const w_fp={objective.w_fp}.")
    emit(f"#const w_fn={objective.w_fn}.")
    emit(":~ accepted(SeqId), negative(SeqId). [w_fp@2,SeqId]")
    emit(":~ not accepted(SeqId), positive(SeqId). [w_fn@2,SeqId]")
    emit("")

    emit("% Regularization constraints:")
    if objective.transition_penalty == 1:
        emit(":~ transition(S1,X,S2). [1@1,S1,S2,X]")
    elif objective.transition_penalty > 1:
        emit(f":~ transition(S1,X,S2). [{objective.transition_penalty}@1,S1,S2,X]")
    if objective.earliness:
        if objective.earliness_mode.value == "first_accept_step":
            emit("firstAccepted(SeqId,T) :- accepted(SeqId,T), T = #min{T1: accepted(SeqId,T1)}.")
            emit(":~ firstAccepted(SeqId,T). [T@1,SeqId,T]")
        else:
            emit(":~ accepted(SeqId,T). [T@1,SeqId,T]")
    emit("")

    emit("% Structural constraints:")
    if structural.accepting_absorbing:
        emit(":- transition(S,_,S2), accepting(S), S2 != S.")
    if structural.start_not_accepting:
        emit(":- start(S), accepting(S).")
    if structural.max_transitions is not None:
        emit(f":- #count{{S1,F,S2: transition(S1,F,S2)}} > {structural.max_transitions}.")
    emit("")

    emit("% ASA interpreter:")
    emit("sequence(SeqId) :- obs(SeqId,_,_).")
    emit("time(SeqId,T) :- obs(SeqId,_,T).")
    emit("seqEnd(SeqId,T+1) :- time(SeqId,T), not time(SeqId,T+1).")
    emit("inState(SeqId,S,1) :- sequence(SeqId), start(S).")
    emit("inState(SeqId,S2,T+1) :- inState(SeqId,S1,T), transition(S1,F,S2), satisfies(SeqId,F,T).")
    if semantics.policy is Policy.SKIP_TILL_ANY_MATCH:
        emit("inState(SeqId,S,T+1) :- inState(SeqId,S,T), time(SeqId,T), "
             "#count{F,S2: transition(S,F,S2), satisfies(SeqId,F,T)} = 0.")
    if semantics.acceptance is Acceptance.EARLIEST_ABSORBING:
        emit("inState(SeqId,S,T+1) :- inState(SeqId,S,T), time(SeqId,T), accepting(S).")
    if semantics.earliest:
        emit("accepted(SeqId,T) :- inState(SeqId,S,T), accepting(S).")
        emit("accepted(SeqId) :- accepted(SeqId,_).")
    else:
        emit("accepted(SeqId) :- inState(SeqId,S,T), accepting(S), seqEnd(SeqId,T).")
        if objective.earliness:
            emit("accepted(SeqId,T) :- inState(SeqId,S,T), accepting(S).")
    emit("")

    emit("% Transition features:")
    for kind in KINDS:
        if kind in kinds:
            emit(FEATURE_DEFS[kind])
    emit("")

    emit("% Attribute-value domain:")
    emit(" ".join(f"att({term(a)})." for a in dataset.attributes))
    emit(" ".join(f"val({term(v)})." for v in alphabet))
    emit(" ".join(f"rank({term(v)},{dataset.alphabet.rank(v) + 1})." for v in alphabet))
    emit("")

    emit("% Training examples:")
    for ex in dataset:
        sid = term(ex.id)
        for t in range(1, ex.mvs.length + 1):
            emit(" ".join(f"obs({sid},av({term(a)},{term(ex.mvs.values[a][t - 1])}),{t})."
                          for a in dataset.attributes))
    for ex in dataset:
        emit(f"{'positive' if ex.positive else 'negative'}({term(ex.id)}).")

    if incumbent is not None:
        if weights is None:
            from .incremental import guard_stats

            stats = guard_stats(incumbent, dataset, semantics)
            weights = {t: stats.weight(t) for t in incumbent.transitions}
        emit("")
        emit("% Existing model (revision task):")
        ordered = sorted(incumbent.transitions, key=lambda t: (t.src, t.dst, str(t.guard)))
        for i, t in enumerate(ordered, start=1):
            fact = f"transition({t.src + 1},{guard_term(t.guard)},{t.dst + 1})"
            emit(f"#const w_{i}={weights.get(t, 0)}.")
            emit(f"existing({fact}).")
            emit(f":~ not {fact}, existing({fact}). [-w_{i}@1,{t.src + 1},{guard_term(t.guard)},{t.dst + 1}]")
        for s in sorted(incumbent.accepting):
            emit(f"existing(accepting({s + 1})).")
            emit(f":~ not accepting({s + 1}), existing(accepting({s + 1})). [1@1,{s + 1}]")

    emit("")
    emit("#show transition/3.")
    emit("#show accepting/1.")
    return "\n".join(out) + "\n"
