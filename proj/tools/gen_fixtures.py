#!/usr/bin/env python3
"""Writes the fixture algebras (fixtures/*.alg) and sample forests (fixtures/*.forest).

The counting algebras are presented by "claim" automata: a state asserts the
capped value of a quantity at a vertex (number of marked vertices, and for
contexts the capped multiplicity of each variable).  Claims are exact values
or lower bounds.  Positive claims have priority 1, so they must be witnessed
on a finite path; all other states have priority 0.
"""

import argparse
import itertools
import json
import os

T = None  # "no claim" in root targets


def cap_add(a, b, cap):
    return min(cap, a + b)


class ClaimAlgebra:
    """Element automata for a quantity capped at `cap`.

    A claim is an interval (lo, hi) of capped values: exact (j, j) or a lower
    bound (j, cap); (0, cap) claims nothing.

    labels: name -> (arity, own contribution, multiplicity per edge label)
    track_vars: whether contexts track variable multiplicities
    """

    def __init__(self, labels, cap, track_vars):
        self.labels = labels
        self.cap = cap
        self.track_vars = track_vars
        self.claims = [(j, j) for j in range(cap)] + [(j, cap) for j in range(cap + 1)]
        self.top = (0, cap)

    # -- states -------------------------------------------------------------

    def states(self, m):
        if not self.track_vars or m == 0:
            return [(c,) for c in self.claims]
        out = [((0, 0),) + mults for mults in itertools.product(self.claims, repeat=m)]
        out += [(c,) + (self.top,) * m for c in self.claims if c != (0, 0)]
        return out

    def claim_name(self, c):
        lo, hi = c
        if lo == hi and lo < self.cap:
            return f"E{lo}"
        return "T" if lo == 0 else f"G{lo}"

    def name(self, vec):
        return "_".join(self.claim_name(c) for c in vec)

    @staticmethod
    def priority(vec):
        return 1 if any(lo > 0 for lo, _ in vec) else 0

    def comps(self, m):
        return 1 + (m if self.track_vars else 0)

    @staticmethod
    def holds(claim, v):
        return claim[0] <= v <= claim[1]

    def exact(self, claim):
        return claim[0] == claim[1] and claim[0] < self.cap

    # -- sums of child vectors ----------------------------------------------

    def sum_nfa(self, targets, m):
        """Sequences of child states whose capped component sums satisfy one
        of `targets`.  Exact components are summed over children claiming
        exact values, lower bounds over the children's lower bounds."""
        k = self.comps(m)
        needed = [i for i in range(k) if any(t[i] != self.top for t in targets)]
        exact = [i for i in needed if any(self.exact(t[i]) for t in targets)]
        letters = [s for s in self.states(m) if all(self.exact(s[i]) for i in exact)]
        start = tuple(0 for _ in needed)
        seen = {start}
        todo = [start]
        edges = []
        while todo:
            cur = todo.pop()
            for s in letters:
                nxt = tuple(cap_add(cur[j], s[i][0], self.cap) for j, i in enumerate(needed))
                edges.append([self.vec_name(cur), self.name(s), self.vec_name(nxt)])
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        states = sorted(seen)

        def final(v):
            return any(all(self.holds(t[i], v[j]) for j, i in enumerate(needed)) for t in targets)

        return {
            "states": [self.vec_name(s) for s in states],
            "initial": [self.vec_name(start)],
            "final": [self.vec_name(s) for s in states if final(s)],
            "edges": sorted(edges),
        }

    @staticmethod
    def vec_name(v):
        return "s" + "".join(str(x) for x in v)

    # -- transition items ---------------------------------------------------

    def result(self, own, mu, groups, m):
        """Capped vector of a vertex from its own contribution and exact group sums."""
        k = self.comps(m)
        out = [own] + [0] * (k - 1)
        for mult, g in zip(mu, groups):
            for i in range(k):
                out[i] = cap_add(out[i], mult * g[i], self.cap)
        return tuple(out)

    def matches(self, state, value):
        return all(self.holds(c, v) for c, v in zip(state, value))

    def sound(self, state, own, mu, groups):
        """Every value allowed by the group claims yields a value matching `state`."""
        # components are independent, so check them one at a time
        for i, claim in enumerate(state):
            if claim == self.top:
                continue
            ranges = [range(g[i][0], g[i][1] + 1) for g in groups]
            for vals in itertools.product(*ranges):
                total = min(own, self.cap) if i == 0 else 0
                for mult, v in zip(mu, vals):
                    total = cap_add(total, mult * v, self.cap)
                if not self.holds(claim, total):
                    return False
        return True

    def weakenings(self, v):
        """Claims containing the exact value v, weakest first."""
        out = [(j, self.cap) for j in range(v + 1)]
        if v < self.cap:
            out.append((v, v))
        return out

    def items(self, state, label, m):
        arity, own, mu = self.labels[label]
        k = self.comps(m)
        values = list(itertools.product(range(self.cap + 1), repeat=k))
        found = []
        for groups in itertools.product(values, repeat=arity):
            if not self.matches(state, self.result(own, mu, groups, m)):
                continue
            gs = [[(v, v) for v in g] for g in groups]
            # weaken each component as far as the item stays sound
            for j in range(arity):
                for i in range(k):
                    for c in self.weakenings(groups[j][i]):
                        keep = gs[j][i]
                        gs[j][i] = c
                        if self.sound(state, own, mu, gs):
                            break
                        gs[j][i] = keep
            item = tuple(tuple(g) for g in gs)
            if item not in found:
                found.append(item)

        # drop items subsumed by a more general one
        def covers(a, b):
            return a != b and all(
                x[0] <= y[0] and y[1] <= x[1] for ga, gb in zip(a, b) for x, y in zip(ga, gb)
            )

        return [it for it in found if not any(covers(o, it) for o in found)]

    # -- automaton ------------------------------------------------------------

    def automaton(self, m, root_targets):
        """root_targets: value vectors (T for any value) the root sum may take."""
        states = self.states(m)
        root_targets = [
            tuple(self.top if v is T else (v, v) if v < self.cap else (self.cap, self.cap) for v in t)
            for t in root_targets
        ]
        nfas = {}

        def ref(targets):
            key = "sum_" + "_".join(self.name(t) for t in targets)
            if key not in nfas:
                nfas[key] = self.sum_nfa(list(targets), m)
            return "@" + key

        delta = []
        for s in states:
            for label in self.labels:
                items = [{str(j): ref([g]) for j, g in enumerate(it)} for it in self.items(s, label, m)]
                if items:
                    delta.append({"state": self.name(s), "symbol": label, "items": items})
            for i in range(m):
                # a variable leaf contributes multiplicity 1 to itself
                value = [0] * self.comps(m)
                if self.track_vars:
                    value[1 + i] = 1
                if self.matches(s, value):
                    delta.append({"state": self.name(s), "symbol": f"x{i}", "items": [{}]})
        return {
            "states": [self.name(s) for s in states],
            "priority": {self.name(s): self.priority(s) for s in states if self.priority(s)},
            "root": ref(root_targets),
            "nfas": nfas,
            "delta": delta,
        }


# ---------------------------------------------------------------------------
# contains_a: at least one vertex labelled by an element 1_n


def contains_a(max_arity=4):
    labels = {}
    for n in range(max_arity + 1):
        labels[f"0_{n}"] = (n, 0, [1] * n)
        labels[f"1_{n}"] = (n, 1, [1] * n)
    alg = ClaimAlgebra(labels, 1, track_vars=False)
    arities = {str(n): [f"0_{n}", f"1_{n}"] for n in range(max_arity + 1)}
    automata = {}
    for n in range(max_arity + 1):
        automata[f"0_{n}"] = alg.automaton(n, [(0,)])
        automata[f"1_{n}"] = alg.automaton(n, [(1,)])
    return {
        "description": "forests with at least one vertex labelled 1_n",
        "arities": arities,
        "generators": [e for n in (0, 1) for e in arities[str(n)]],
        "accepted": ["1_0"],
        "letters": {"a": "1_1", "b": "0_1"},
        "automata": automata,
    }


# ---------------------------------------------------------------------------
# two_a: at least two a-labelled vertices (counts capped at 2)


def two_a():
    # own a-count and variable multiplicities (2 stands for "at least 2")
    labels = {
        "c0": (0, 0, []),
        "c1": (0, 1, []),
        "c2": (0, 2, []),
        "u0_1": (1, 0, [1]),
        "u0_2": (1, 0, [2]),
        "u1": (1, 1, [1]),
        "u2": (1, 2, [1]),
    }
    for a, b in itertools.product((1, 2), repeat=2):
        labels[f"w0_{a}{b}"] = (2, 0, [a, b])
    labels["w1"] = (2, 1, [1, 1])
    labels["w2"] = (2, 2, [1, 1])
    alg = ClaimAlgebra(labels, 2, track_vars=True)
    arities = {
        "0": ["c0", "c1", "c2"],
        "1": ["u0_1", "u0_2", "u1", "u2"],
        "2": ["w0_11", "w0_12", "w0_21", "w0_22", "w1", "w2"],
    }
    roots = {
        "c0": [(0,)],
        "c1": [(1,)],
        "c2": [(2,)],
        "u0_1": [(0, 1)],
        "u0_2": [(0, 2)],
        "u1": [(1, T)],
        "u2": [(2, T)],
        "w1": [(1, T, T)],
        "w2": [(2, T, T)],
    }
    # an absent x0 is classed with a single occurrence
    for a, b in itertools.product((1, 2), repeat=2):
        roots[f"w0_{a}{b}"] = [(0, 0, b), (0, 1, b)] if a == 1 else [(0, 2, b)]
    automata = {}
    for m, names in arities.items():
        for e in names:
            automata[e] = alg.automaton(int(m), roots[e])
    return {
        "description": "forests with at least two vertices labelled a",
        "arities": arities,
        "generators": arities["0"] + arities["1"],
        "accepted": ["c2"],
        "letters": {"a": "u1", "b": "u0_1"},
        "automata": automata,
    }


# ---------------------------------------------------------------------------
# infinite_branch: some branch is infinite


def infinite_branch():
    labels = {"fin": 0, "inf": 0, "f1": 1, "i1": 1}

    def automaton(m, witness):
        # S: an infinite branch continues here; F: every branch below is finite
        delta = []
        for label, ar in labels.items():
            groups = [str(j) for j in range(ar)]
            if label in ("inf", "i1"):
                delta.append({"state": "S", "symbol": label, "items": [{g: "T*" for g in groups}]})
            elif ar:
                delta.append({"state": "S", "symbol": label, "items": [{"0": "T* S T*"}]})
            if label in ("fin", "f1"):
                delta.append({"state": "F", "symbol": label, "items": [{g: "F*" for g in groups}]})
            delta.append({"state": "T", "symbol": label, "items": [{g: "T*" for g in groups}]})
        for i in range(m):
            delta.append({"state": "F", "symbol": f"x{i}", "items": [{}]})
            delta.append({"state": "T", "symbol": f"x{i}", "items": [{}]})
        return {
            "states": ["S", "F", "T"],
            "priority": {"F": 1},
            "root": "T* S T*" if witness else "F*",
            "delta": delta,
        }

    return {
        "description": "forests with an infinite branch",
        "arities": {"0": ["fin", "inf"], "1": ["f1", "i1"]},
        "generators": ["fin", "inf", "f1", "i1"],
        "accepted": ["inf"],
        "letters": {"a": "f1"},
        "automata": {
            "fin": automaton(0, False),
            "inf": automaton(0, True),
            "f1": automaton(1, False),
            "i1": automaton(1, True),
        },
    }


# ---------------------------------------------------------------------------
# trivial: one element per arity


def trivial(max_arity=1):
    names = {n: f"z{n}" for n in range(max_arity + 1)}

    def automaton(m):
        delta = [
            {"state": "q", "symbol": names[n], "items": [{str(j): "q*" for j in range(n)}]}
            for n in range(max_arity + 1)
        ]
        delta += [{"state": "q", "symbol": f"x{i}", "items": [{}]} for i in range(m)]
        return {"states": ["q"], "root": "q*", "delta": delta}

    return {
        "description": "every forest",
        "arities": {str(n): [names[n]] for n in names},
        "generators": [names[0], names[1]],
        "accepted": [names[0]],
        "letters": {"a": names[1]},
        "automata": {names[n]: automaton(n) for n in names},
    }


# ---------------------------------------------------------------------------
# sample forests


def forests():
    unary = [["a", 1], ["b", 1]]
    return {
        "single_a": {"alphabet": unary, "nodes": [{"label": "a", "children": []}], "roots": [0]},
        "a_loop": {"alphabet": unary, "nodes": [{"label": "a", "children": [[0, 0]]}], "roots": [0]},
        "a_plus_a": {
            "alphabet": unary,
            "nodes": [{"label": "a", "children": []}, {"label": "a", "children": []}],
            "roots": [0, 1],
        },
        "b_loop_side_a": {
            "alphabet": unary,
            "nodes": [{"label": "b", "children": [[0, 0], [0, 1]]}, {"label": "a", "children": []}],
            "roots": [0],
        },
        "a_chain3": {
            "alphabet": unary,
            "nodes": [
                {"label": "a", "children": [[0, 1]]},
                {"label": "a", "children": [[0, 2]]},
                {"label": "a", "children": []},
            ],
            "roots": [0],
        },
        "context_a_x0": {
            "alphabet": unary,
            "nodes": [{"label": "a", "children": [[0, 1]]}, {"label": "x0", "children": []}],
            "roots": [0],
        },
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "fixtures"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    algebras = {
        "contains_a": contains_a(),
        "two_a": two_a(),
        "infinite_branch": infinite_branch(),
        "trivial": trivial(),
    }
    for name, alg in algebras.items():
        with open(os.path.join(args.out, name + ".alg"), "w") as f:
            # the large algebras are written compactly
            json.dump(alg, f, indent=None if len(alg["automata"]) > 4 else 1, sort_keys=True)
            f.write("\n")
    for name, g in forests().items():
        for i, n in enumerate(g["nodes"]):
            n["id"] = i
        with open(os.path.join(args.out, name + ".forest"), "w") as f:
            json.dump(g, f, indent=1)
            f.write("\n")


if __name__ == "__main__":
    main()
