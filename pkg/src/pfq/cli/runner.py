"""Execute parsed scenario scripts and collect a JSON-ready report."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from pfq.cli import syntax as S
from pfq.errors import PfqError, TowerMismatch
from pfq.fields import (
    FieldElem,
    FieldTower,
    char2_rational,
    is_square,
    prime_field,
    rationals,
    reals,
    square_class_rep,
    valuation_split,
)
from pfq.forms import (
    PfisterPres,
    QForm,
    diag,
    expand,
    gram,
    negate,
    orth_sum,
    orth_sum_all,
    pairs_form,
    scale,
    theta_complement,
)
from pfq.invariant import (
    LinkedTuple,
    invariance_sweep,
    invariant_tuple,
    separation_dims_inseparable,
    separation_dims_separable,
    thm41_instances,
    thm51_instances,
    verify_thm41_part1,
    verify_thm41_part2,
    verify_thm51,
)
from pfq.linkage import (
    ArtinSchreierShift,
    Char2NormScale,
    NormScale,
    PairTwist,
    SlotSquareScale,
    SlotSwap,
    apply_move,
    chain_step,
    inseparably_k_linked,
    k_plus_one_linked,
)
from pfq.oracles import (
    DEFAULT_BUDGET,
    SearchBudget,
    Verdict,
    is_hyperbolic,
    is_isotropic,
    isometric,
    signature,
    springer_split,
    witt_index,
)

SCHEMA = 1
_MOVES = {
    "square": SlotSquareScale,
    "swap": SlotSwap,
    "twist": PairTwist,
    "norm": NormScale,
    "as": ArtinSchreierShift,
    "c2norm": Char2NormScale,
}


class ScriptError(Exception):
    pass


@dataclass
class Runner:
    budget: SearchBudget = DEFAULT_BUDGET
    seed: int = 0
    fields: dict = field(default_factory=lambda: {"Q": rationals(), "R": reals()})
    values: dict = field(default_factory=dict)
    current: str = "Q"

    # evaluation
    def tower(self, fe: S.FieldExpr | None) -> FieldTower:
        if fe is None:
            return self.fields[self.current]
        if fe.kind == "Q":
            return rationals()
        if fe.kind == "R":
            return reals()
        if fe.kind == "Fp":
            return prime_field(fe.args[0])
        if fe.kind == "F2":
            return char2_rational(*fe.args)
        if fe.kind == "laurent":
            return self.tower(fe.args[0]).laurent_ext(*fe.args[1:])
        return self.fields[fe.args[0]]

    def _bound(self, name: str, T: FieldTower):
        v = self.values[name]
        if v.tower == T:
            return v
        if isinstance(v, FieldElem) and v.tower.is_below(T):
            return T.lift(v)
        raise TowerMismatch(f"{name} lives over {v.tower}, not {T}")

    def elem(self, node, T: FieldTower) -> FieldElem:
        if isinstance(node, S.Num):
            return T(node.value)
        if isinstance(node, S.Var):
            return T.var(node.name)
        if isinstance(node, S.Ref):
            return self._bound(node.name, T)
        if isinstance(node, S.Neg):
            return -self.elem(node.arg, T)
        if isinstance(node, S.Pow):
            return self.elem(node.base, T) ** node.exp
        if isinstance(node, S.Bin):
            a, b = self.elem(node.left, T), self.elem(node.right, T)
            return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[node.op](b)
        raise ScriptError(f"not an element: {node}")

    def pf(self, node, T: FieldTower) -> PfisterPres:
        if isinstance(node, S.Ref):
            return self._bound(node.name, T)
        if isinstance(node, S.MoveApp):
            p = self.pf(node.pf, T)
            args = [a if isinstance(a, int) else self.elem(a, T) for a in node.move.args]
            return apply_move(p, _MOVES[node.move.kind](*args))
        slots = tuple(self.elem(e, T) for e in node.slots)
        a = self.elem(node.as_slot, T) if node.as_slot is not None else None
        return PfisterPres(T, slots, a, node.shared)

    def form(self, node, T: FieldTower) -> QForm:
        if isinstance(node, (S.PfLit, S.MoveApp)):
            return expand(self.pf(node, T))
        if isinstance(node, S.Ref):
            v = self._bound(node.name, T)
            return expand(v) if isinstance(v, PfisterPres) else v
        n, a = node.name, node.args
        if n == "diag":
            return diag(T, [self.elem(e, T) for e in a])
        if n == "pairs":
            return pairs_form(T, [(self.elem(c, T), self.elem(x, T)) for c, x in a], [self.elem(e, T) for e in node.quasi])
        if n == "expand":
            return expand(self.pf(a[0], T))
        if n == "theta":
            return theta_complement(self.pf(a[0], T), a[1])
        if n == "orth":
            return orth_sum_all([self.form(f, T) for f in a], T)
        if n == "neg":
            return negate(self.form(a[0], T))
        return scale(self.elem(a[0], T), self.form(a[1], T))

    def value(self, node, T: FieldTower):
        if isinstance(node, (S.PfLit, S.MoveApp)):
            return self.pf(node, T)
        if isinstance(node, S.FormCall):
            return self.form(node, T)
        if isinstance(node, S.Ref) and node.kind != "elem":
            return self._bound(node.name, T)
        return self.elem(node, T)

    # statements
    def execute(self, st) -> dict:
        if isinstance(st, S.FieldDecl):
            self.fields[st.name] = self.tower(st.expr)
            self.current = st.name
            return {"value": str(self.fields[st.name])}
        T = self.tower(st.over)
        if isinstance(st, S.Let):
            v = self.value(st.value, T)
            self.values[st.name] = v
            return {"value": str(v)}
        return getattr(self, "cmd_" + st.verb.replace("-", "_"))(st, T)

    def cmd_isotropic(self, st, T):
        return is_isotropic(self.form(st.args[0], T), self.budget).to_json()

    def cmd_witt(self, st, T):
        rep = witt_index(self.form(st.args[0], T), self.budget)
        return {"verdict": "yes" if rep.exact else "unknown", "value": str(rep.witt_index), **rep.to_json()}

    def cmd_hyperbolic(self, st, T):
        v = self.value(st.args[0], T)
        d = is_hyperbolic(v, self.budget).to_json()
        return {**d, "hyperbolic": d["verdict"]}

    def cmd_isometric(self, st, T):
        return isometric(self.form(st.args[0], T), self.form(st.args[1], T), self.budget).to_json()

    def cmd_signature(self, st, T):
        pos, neg = signature(self.form(st.args[0], T))
        return {"value": str(pos - neg), "positive": pos, "negative": neg}

    def cmd_dim(self, st, T):
        return {"value": str(self.value(st.args[0], T).dim)}

    def cmd_linked_sep(self, st, T):
        k, p1, p2 = st.args
        lv = k_plus_one_linked(self.pf(p1, T), self.pf(p2, T), k, self.budget)
        return {**lv.to_json(), "value": str(lv.omega.dim)}

    def cmd_linked_insep(self, st, T):
        k, p1, p2 = st.args
        lv = inseparably_k_linked(self.pf(p1, T), self.pf(p2, T), k, self.budget)
        return {**lv.to_json(), "value": str(lv.omega.dim)}

    def cmd_invariant(self, st, T):
        k, *ps = st.args
        res = invariant_tuple(LinkedTuple(tuple(self.pf(p, T) for p in ps), k))
        p = res.presentation
        d = is_hyperbolic(p if p.char2 else expand(p), self.budget).to_json()
        out = {"verdict": d["verdict"], "value": str(p), "fold": res.fold, "hyperbolic": d["verdict"]}
        if "certificate" in d:
            out["certificate"] = d["certificate"]
        return out

    def cmd_chain_step(self, st, T):
        f = self.form(st.args[0], T)
        V1 = [[self.elem(e, T) for e in v] for v in st.args[1]]
        V2 = [[self.elem(e, T) for e in v] for v in st.args[2]]
        phis = [self.pf(p, T) for p in st.args[3:]]
        cs = chain_step(gram(f), V1, V2, *phis, budget=self.budget)
        out = {"value": str(cs.gamma), "certificate": [str(x) for x in cs.vector]}
        if cs.enlarged:
            out["enlarged"] = [str(p) for p in cs.enlarged]
            verdicts = []
            for p in cs.enlarged:
                sub = expand(p)
                rep = witt_index(orth_sum(f, negate(sub)), self.budget)
                if rep.witt_index >= sub.dim:
                    verdicts.append("yes")
                else:
                    verdicts.append("no" if rep.exact else "unknown")
            out["verdict"] = "no" if "no" in verdicts else ("unknown" if "unknown" in verdicts else "yes")
            out["subforms"] = verdicts
        else:
            out["verdict"] = "yes"
        return out

    def cmd_squareclass(self, st, T):
        return {"value": str(square_class_rep(self.elem(st.args[0], T)))}

    def cmd_issquare(self, st, T):
        return {"verdict": "yes" if is_square(self.elem(st.args[0], T)) else "no"}

    def cmd_valuation(self, st, T):
        var = st.args[1].name if len(st.args) > 1 else None
        v, res = valuation_split(self.elem(st.args[0], T), var)
        return {"value": str(v), "residue": str(res)}

    def cmd_springer(self, st, T):
        var = st.args[1].name if len(st.args) > 1 else None
        q0, q1 = springer_split(self.form(st.args[0], T), var)
        return {"residue_forms": [str(q0), str(q1)], "value": str(q0.dim + q1.dim)}

    def cmd_separation_dims(self, st, T):
        which, m, n, k = st.args
        fn = separation_dims_separable if which == "sep" else separation_dims_inseparable
        r = fn(m, n, k)
        return {"verdict": "yes" if r.holds else "no", "value": str(r.omega_dim), **r.to_json()}

    def cmd_verify(self, st, T):
        target, *flags = st.args
        opts = {f[2:]: v for f, v in flags}
        count = opts.get("count", (10,))[0]
        seed = opts.get("seed", (self.seed,))[0]
        ks = opts.get("k", None)
        over = self.tower(st.over) if st.over is not None else None
        if target in ("thm41", "thm41-triples", "thm41-converse"):
            k = ks[0] if ks else 1
            # shared bilinear slots need fold >= 2k; the converse needs one (k+1)-fold form
            default = {"thm41": (2 * k, 2 * k + 1), "thm41-triples": (2 * k, 2 * k, 2 * k + 1), "thm41-converse": (k + 1, 2 * k + 1)}
            folds = opts.get("folds", default[target])
            insts = thm41_instances(count, seed, k, folds, over)
            rep = (verify_thm41_part2 if target == "thm41-converse" else verify_thm41_part1)(insts, self.budget)
            return _harness(rep.to_json())
        if target == "thm51":
            insts = thm51_instances(count, seed, ks or (1, 2), over)
            return _harness(verify_thm51(insts, self.budget).to_json())
        reps = invariance_sweep(over or T, count, seed, self.budget)
        counts = {v.value: sum(r.decision.verdict is v for r in reps) for v in Verdict}
        return _harness({"harness": "invariance", "count": len(reps), **counts, "instances": [r.to_json() for r in reps]})


def _harness(js: dict) -> dict:
    verdict = "no" if js["no"] else ("unknown" if js["unknown"] else "yes")
    return {"verdict": verdict, "value": str(js["yes"]), **js}


# -- reports ------------------------------------------------------------------------


def _int_literal(node) -> int | None:
    if isinstance(node, S.Num):
        return node.value
    if isinstance(node, S.Neg) and isinstance(node.arg, S.Num):
        return -node.arg.value
    return None


def _is_int(text) -> bool:
    try:
        int(text)
        return True
    except (TypeError, ValueError):
        return False


def check_expect(runner: Runner, st, result: dict | None, error: str | None) -> list[dict]:
    out = []
    T = None
    for e in st.expects:
        if e.kind == "error":
            ok = error is not None
        elif error is not None:
            ok = False
        elif e.kind == "hyperbolic":
            ok = result.get("hyperbolic", result.get("verdict") if st.verb == "hyperbolic" else None) == "yes"
        elif e.kind == "value":
            T = T or runner.tower(st.over)
            got = result.get("value")
            lit = _int_literal(e.value)
            if lit is not None and _is_int(got):
                # counts and dimensions are integers, not field elements
                want = str(lit)
            else:
                try:
                    want = str(runner.value(e.value, T))
                except PfqError as exc:
                    want = f"<{exc}>"
            ok = got == want
            out.append({"expect": f"value={want}", "got": result.get("value"), "pass": ok})
            continue
        else:
            ok = result.get("verdict") == e.kind
        got = "error" if error is not None else result.get("verdict")
        out.append({"expect": e.kind, "got": got, "pass": ok})
    return out


def run(script: S.Script, budget: SearchBudget = DEFAULT_BUDGET, seed: int = 0, runner: Runner | None = None) -> dict:
    """Run every statement, never aborting; returns the report dict."""
    runner = runner or Runner(budget, seed)
    stmts = []
    for st in script.statements:
        t0 = time.perf_counter()
        result, error = None, None
        try:
            result = runner.execute(st)
        except (PfqError, ScriptError, ValueError, ArithmeticError, TypeError) as exc:
            error = f"{type(exc).__name__}: {exc}"
        entry = {"line": st.line, "statement": S.fmt_statement(st)}
        if result is not None:
            entry["result"] = result
        if error is not None:
            entry["error"] = error
        checks = check_expect(runner, st, result, error) if isinstance(st, S.Command) else []
        if checks:
            entry["expect"] = checks
            entry["status"] = "pass" if all(c["pass"] for c in checks) else "fail"
        else:
            entry["status"] = "error" if error is not None else "ok"
        entry["timing_ms"] = round(1000 * (time.perf_counter() - t0), 3)
        stmts.append(entry)
    summary = {
        "statements": len(stmts),
        "expectations": sum(len(s.get("expect", [])) for s in stmts),
        "passed": sum(s["status"] == "pass" for s in stmts),
        "failed": sum(s["status"] == "fail" for s in stmts),
        "errors": sum(s["status"] == "error" for s in stmts),
    }
    return {
        "schema": SCHEMA,
        "seed": seed,
        "budget": {
            "max_total_degree": budget.max_total_degree,
            "max_coeff_height": budget.max_coeff_height,
            "max_candidates": budget.max_candidates,
        },
        "statements": stmts,
        "summary": summary,
    }


def exit_code(report: dict) -> int:
    s = report["summary"]
    if s["errors"]:
        return 2
    return 1 if s["failed"] else 0


def strip_timing(report: dict) -> dict:
    """The report without wall-clock fields, for determinism comparisons."""
    out = dict(report)
    out["statements"] = [{k: v for k, v in s.items() if k != "timing_ms"} for s in report["statements"]]
    return out
