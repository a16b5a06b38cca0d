"""CDCL SAT solver with two-watched literals and first-UIP learning.

Literals are nonzero ints (DIMACS convention: -v negates variable v).
Small by design; the bit-blaster keeps instances modest and the word
level simplifier discharges most queries before they get here.
"""

import time


class SatSolver:
    def __init__(self):
        self.nvars = 0
        self.clauses = []          # each clause: list of lits
        self.watches = {}          # lit -> clause indexes watching it
        self.assign = {}           # var -> bool
        self.level = {}            # var -> decision level
        self.reason = {}           # var -> clause index or None (decision)
        self.trail = []
        self.trail_lim = []
        self.activity = {}
        self.var_inc = 1.0
        self.phase = {}
        self._unsat = False

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def _watch(self, lit, ci):
        self.watches.setdefault(lit, []).append(ci)

    def add_clause(self, lits):
        lits = sorted(set(lits), key=abs)
        if any(-l in lits for l in lits):
            return  # tautology
        for l in lits:
            v = abs(l)
            if v > self.nvars:
                self.nvars = v
        # Top-level simplification against fixed assignments.
        if not self.trail_lim:
            fixed = []
            for l in lits:
                val = self.assign.get(abs(l))
                if val is None:
                    fixed.append(l)
                elif val == (l > 0):
                    return  # already satisfied
            lits = fixed
        if not lits:
            self._unsat = True
            return
        if len(lits) == 1:
            if not self._enqueue(lits[0], None):
                self._unsat = True
            return
        ci = len(self.clauses)
        self.clauses.append(lits)
        self._watch(lits[0], ci)
        self._watch(lits[1], ci)

    def _value(self, lit):
        v = self.assign.get(abs(lit))
        if v is None:
            return None
        return v == (lit > 0)

    def _enqueue(self, lit, reason_ci):
        val = self._value(lit)
        if val is not None:
            return val
        v = abs(lit)
        self.assign[v] = lit > 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason_ci
        self.trail.append(lit)
        return True

    def _propagate(self):
        """Returns a conflicting clause index or None."""
        i = 0
        while i < len(self.trail):
            lit = self.trail[i]
            i += 1
            falsified = -lit
            watchers = self.watches.get(falsified, [])
            kept = []
            for ci in watchers:
                clause = self.clauses[ci]
                # Ensure the falsified watch sits at position 1.
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                if self._value(clause[0]) is True:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self._value(clause[k]) is not False:
                        clause[1], clause[k] = clause[k], clause[1]
                        self._watch(clause[1], ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if not self._enqueue(clause[0], ci):
                    kept.extend(watchers[watchers.index(ci) + 1:])
                    self.watches[falsified] = kept
                    return ci
            self.watches[falsified] = kept
        return None

    def _bump(self, v):
        self.activity[v] = self.activity.get(v, 0.0) + self.var_inc
        if self.activity[v] > 1e100:
            for k in self.activity:
                self.activity[k] *= 1e-100
            self.var_inc *= 1e-100

    def _analyze(self, conflict_ci):
        """First-UIP conflict analysis: (learned clause, backjump level)."""
        cur_level = len(self.trail_lim)
        seen = set()
        learned = []
        counter = 0
        lits = list(self.clauses[conflict_ci])
        idx = len(self.trail) - 1
        uip = None
        while True:
            for lit in lits:
                v = abs(lit)
                if v in seen:
                    continue
                seen.add(v)
                self._bump(v)
                if self.level.get(v, 0) >= cur_level:
                    counter += 1
                else:
                    learned.append(lit)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            uip_lit = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                uip = -uip_lit
                break
            lits = [l for l in self.clauses[self.reason[abs(uip_lit)]]
                    if abs(l) != abs(uip_lit)]
        learned.insert(0, uip)
        if len(learned) == 1:
            return learned, 0
        back = max(self.level[abs(l)] for l in learned[1:])
        return learned, back

    def _backtrack(self, target_level):
        while self.trail_lim and len(self.trail_lim) > target_level:
            lim = self.trail_lim.pop()
            while len(self.trail) > lim:
                lit = self.trail.pop()
                v = abs(lit)
                self.phase[v] = self.assign[v]
                del self.assign[v]
                del self.level[v]
                del self.reason[v]

    def _decide(self):
        best, best_act = None, -1.0
        for v in range(1, self.nvars + 1):
            if v not in self.assign:
                act = self.activity.get(v, 0.0)
                if act > best_act:
                    best, best_act = v, act
        if best is None:
            return None
        return best if self.phase.get(best, False) else -best

    def solve(self, deadline=None) -> str:
        """Returns "sat", "unsat", or "unknown" (deadline hit)."""
        if self._unsat:
            return "unsat"
        conflicts = 0
        while True:
            if deadline is not None and conflicts % 64 == 0 \
                    and time.monotonic() > deadline:
                return "unknown"
            conflict = self._propagate()
            if conflict is not None:
                conflicts += 1
                if not self.trail_lim:
                    return "unsat"
                learned, back = self._analyze(conflict)
                self._backtrack(back)
                self.var_inc *= 1.05
                if len(learned) == 1:
                    if not self._enqueue(learned[0], None):
                        return "unsat"
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learned)
                    self._watch(learned[0], ci)
                    self._watch(learned[1], ci)
                    self._enqueue(learned[0], ci)
                continue
            decision = self._decide()
            if decision is None:
                return "sat"
            self.trail_lim.append(len(self.trail))
            self._enqueue(decision, None)

    def model(self) -> dict:
        return dict(self.assign)
