#include "sat.hpp"

#include <algorithm>

namespace deon::sat {

int Solver::addVar() {
  assigns_.push_back(kUndef);
  levelOf_.push_back(0);
  reason_.push_back(-1);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.resize(assigns_.size() * 2);
  return varCount() - 1;
}

// Only valid before solve(): everything is still at level 0.
void Solver::addClause(std::vector<int> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i] == negate(lits[i - 1])) return;  // tautology
  std::erase_if(lits, [&](int l) { return litValue(l) == kFalse; });
  if (std::any_of(lits.begin(), lits.end(), [&](int l) { return litValue(l) == kTrue; })) return;
  if (lits.empty()) {
    unsat_ = true;
    return;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], -1);
    if (propagate() != -1) unsat_ = true;
    return;
  }
  clauses_.push_back(std::move(lits));
  const int ci = static_cast<int>(clauses_.size()) - 1;
  watches_[clauses_[ci][0]].push_back(ci);
  watches_[clauses_[ci][1]].push_back(ci);
}

void Solver::enqueue(int lit, int reason) {
  const int var = lit >> 1;
  assigns_[var] = (lit & 1) ? kFalse : kTrue;
  levelOf_[var] = level();
  reason_[var] = reason;
  trail_.push_back(lit);
}

// Returns the index of a falsified clause, or -1.
int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const int falseLit = negate(trail_[qhead_++]);
    std::vector<int>& ws = watches_[falseLit];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const int ci = ws[i++];
      std::vector<int>& c = clauses_[ci];
      if (c[0] == falseLit) std::swap(c[0], c[1]);
      if (litValue(c[0]) == kTrue) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (litValue(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (litValue(c[0]) == kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

// First-UIP learning.
void Solver::analyze(int conflict, std::vector<int>& learnt, int& backtrackLevel) {
  learnt.assign(1, -1);
  int pathCount = 0;
  int p = -1;
  int index = static_cast<int>(trail_.size()) - 1;
  int ci = conflict;
  do {
    const std::vector<int>& c = clauses_[ci];
    for (std::size_t k = p == -1 ? 0 : 1; k < c.size(); ++k) {
      const int var = c[k] >> 1;
      if (seen_[var] || levelOf_[var] == 0) continue;
      seen_[var] = 1;
      bump(var);
      if (levelOf_[var] >= level())
        ++pathCount;
      else
        learnt.push_back(c[k]);
    }
    while (!seen_[trail_[index] >> 1]) --index;
    p = trail_[index--];
    ci = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --pathCount;
  } while (pathCount > 0);
  learnt[0] = negate(p);

  backtrackLevel = 0;
  std::size_t maxAt = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    seen_[learnt[k] >> 1] = 0;
    if (levelOf_[learnt[k] >> 1] > backtrackLevel) {
      backtrackLevel = levelOf_[learnt[k] >> 1];
      maxAt = k;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[maxAt]);
}

void Solver::cancelUntil(int lvl) {
  if (level() <= lvl) return;
  for (std::size_t k = trail_.size(); k-- > static_cast<std::size_t>(trailLim_[lvl]);) {
    assigns_[trail_[k] >> 1] = kUndef;
    reason_[trail_[k] >> 1] = -1;
  }
  trail_.resize(trailLim_[lvl]);
  trailLim_.resize(lvl);
  qhead_ = trail_.size();
}

int Solver::pickBranch() const {
  int best = -1;
  for (int v = 0; v < varCount(); ++v)
    if (assigns_[v] == kUndef && (best < 0 || activity_[v] > activity_[best])) best = v;
  return best;
}

void Solver::bump(int var) {
  activity_[var] += increment_;
  if (activity_[var] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    increment_ *= 1e-100;
  }
}

bool Solver::solve() {
  if (unsat_) return false;
  std::vector<int> learnt;
  while (true) {
    const int conflict = propagate();
    if (conflict != -1) {
      if (level() == 0) return false;
      int backtrackLevel = 0;
      analyze(conflict, learnt, backtrackLevel);
      cancelUntil(backtrackLevel);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back(learnt);
        const int ci = static_cast<int>(clauses_.size()) - 1;
        watches_[learnt[0]].push_back(ci);
        watches_[learnt[1]].push_back(ci);
        enqueue(learnt[0], ci);
      }
      increment_ /= 0.95;
      continue;
    }
    const int var = pickBranch();
    if (var < 0) return true;
    trailLim_.push_back(static_cast<int>(trail_.size()));
    enqueue(neg(var), -1);
  }
}

}  // namespace deon::sat
