//! Exact solver for [`FacilityInstance`].
//!
//! The objective only counts open facilities, so the search walks open-set
//! sizes upward from `ceil(total demand / L)` and, within a size, enumerates
//! index sets in lexicographic order. The first feasible set found is the
//! lexicographically smallest optimum.
//!
//! A partial set can be pruned when the sites it already "locks" overload a
//! facility: a site is locked once its nearest chosen facility is strictly
//! nearer than every facility that could still be added.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::facility::{FacilityInstance, FacilitySolution, SolutionDoc};
use crate::{Error, Result};

/// Largest instance [`exhaustive_solve`] accepts by default.
pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: FacilitySolution,
    pub nodes_explored: u64,
    pub subproblems_checked: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReportDoc {
    pub solution: SolutionDoc,
    pub nodes_explored: u64,
    pub subproblems_checked: u64,
    pub wall_time_ms: f64,
}

impl SolveReport {
    pub fn to_doc(&self) -> SolveReportDoc {
        SolveReportDoc {
            solution: self.solution.to_doc(),
            nodes_explored: self.nodes_explored,
            subproblems_checked: self.subproblems_checked,
            wall_time_ms: self.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// Max flow on a small dense graph (Edmonds-Karp).
struct FlowNet {
    cap: Vec<Vec<u64>>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        Self {
            cap: vec![vec![0; n]; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: u64) {
        self.cap[u][v] += c;
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let n = self.cap.len();
        let mut total = 0;
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for v in 0..n {
                    if prev[v] == usize::MAX && self.cap[u][v] > 0 {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                return total;
            }
            let mut push = u64::MAX;
            let mut v = t;
            while v != s {
                push = push.min(self.cap[prev[v]][v]);
                v = prev[v];
            }
            let mut v = t;
            while v != s {
                let u = prev[v];
                self.cap[u][v] -= push;
                self.cap[v][u] += push;
                v = u;
            }
            total += push;
        }
    }
}

fn residual_capacity(instance: &FacilityInstance) -> u64 {
    instance.capacity().floor() as u64
}

/// Assign every site to one of its nearest open facilities without
/// exceeding capacity, or report that no such assignment exists.
///
/// Demand is unsplittable, so sites with tied nearest facilities are
/// placed by backtracking (largest demand first). A splittable max-flow
/// relaxation rejects hopeless tie patterns before the search.
pub fn assign_feasible(instance: &FacilityInstance, open_set: &[usize]) -> Option<FacilitySolution> {
    if open_set.is_empty() {
        return None;
    }
    let n = instance.len();
    let demand = instance.demand();
    let cap = residual_capacity(instance);
    let mut load = vec![0u64; n];
    let mut facility_of = vec![usize::MAX; n];
    let mut tied: Vec<(usize, Vec<usize>)> = Vec::new();

    for x in 0..n {
        let near = instance.nearest_open(x, open_set);
        if near.len() == 1 {
            let y = near[0];
            load[y] += demand[x] as u64;
            if load[y] > cap {
                return None;
            }
            facility_of[x] = y;
        } else {
            tied.push((x, near));
        }
    }

    if !tied.is_empty() {
        // splittable relaxation: source -> tied sites -> facilities -> sink
        let (src, sink) = (tied.len() + open_set.len(), tied.len() + open_set.len() + 1);
        let mut net = FlowNet::new(sink + 1);
        let mut need = 0;
        for (i, (x, near)) in tied.iter().enumerate() {
            net.add(src, i, demand[*x] as u64);
            need += demand[*x] as u64;
            for y in near {
                let j = open_set.iter().position(|o| o == y).expect("nearest facility is open");
                net.add(i, tied.len() + j, demand[*x] as u64);
            }
        }
        for (j, &y) in open_set.iter().enumerate() {
            net.add(tied.len() + j, sink, cap - load[y]);
        }
        if net.max_flow(src, sink) < need {
            return None;
        }

        tied.sort_by(|a, b| demand[b.0].cmp(&demand[a.0]).then(a.0.cmp(&b.0)));
        if !place_tied(&tied, 0, demand, cap, &mut load, &mut facility_of) {
            return None;
        }
    }
    Some(FacilitySolution::from_assignment(instance, open_set, &facility_of))
}

fn place_tied(
    tied: &[(usize, Vec<usize>)],
    i: usize,
    demand: &[u32],
    cap: u64,
    load: &mut [u64],
    facility_of: &mut [usize],
) -> bool {
    let Some((x, near)) = tied.get(i) else {
        return true;
    };
    let a = demand[*x] as u64;
    for &y in near {
        if load[y] + a <= cap {
            load[y] += a;
            facility_of[*x] = y;
            if place_tied(tied, i + 1, demand, cap, load, facility_of) {
                return true;
            }
            load[y] -= a;
        }
    }
    false
}

struct Search<'a> {
    instance: &'a FacilityInstance,
    /// `suffix_min[x][t]`: smallest distance from `x` to any site with index `>= t`
    suffix_min: Vec<Vec<f64>>,
    eps: f64,
    cap: u64,
    nodes: u64,
    checked: u64,
}

impl<'a> Search<'a> {
    fn new(instance: &'a FacilityInstance) -> Self {
        let n = instance.len();
        let suffix_min = (0..n)
            .map(|x| {
                let mut s = vec![f64::INFINITY; n + 1];
                for t in (0..n).rev() {
                    s[t] = s[t + 1].min(instance.distance(x, t));
                }
                s
            })
            .collect();
        Self {
            instance,
            suffix_min,
            eps: instance.tie_eps(),
            cap: residual_capacity(instance),
            nodes: 0,
            checked: 0,
        }
    }

    /// Sites whose nearest facility is already decided overload it.
    fn locked_overload(&self, chosen: &[usize], nearest: &[f64], next: usize) -> bool {
        let n = self.instance.len();
        let mut load = vec![0u64; n];
        for x in 0..n {
            if nearest[x] + self.eps >= self.suffix_min[x][next] {
                continue;
            }
            let mut near = chosen
                .iter()
                .filter(|&&y| self.instance.distance(x, y) <= nearest[x] + self.eps);
            let (Some(&y), None) = (near.next(), near.next()) else {
                continue;
            };
            load[y] += self.instance.demand()[x] as u64;
            if load[y] > self.cap {
                return true;
            }
        }
        false
    }

    fn descend(
        &mut self,
        k: usize,
        next: usize,
        chosen: &mut Vec<usize>,
        nearest: &[f64],
    ) -> Option<FacilitySolution> {
        self.nodes += 1;
        let n = self.instance.len();
        if chosen.len() == k {
            self.checked += 1;
            return assign_feasible(self.instance, chosen);
        }
        if !chosen.is_empty() && self.locked_overload(chosen, nearest, next) {
            return None;
        }
        let remaining = k - chosen.len();
        for y in next..=(n - remaining) {
            let updated: Vec<f64> = (0..n)
                .map(|x| nearest[x].min(self.instance.distance(x, y)))
                .collect();
            chosen.push(y);
            let found = self.descend(k, y + 1, chosen, &updated);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Minimum-cost solution; among optimal open sets the lexicographically
/// smallest one is returned.
pub fn solve(instance: &FacilityInstance) -> SolveReport {
    let start = Instant::now();
    let n = instance.len();
    let mut search = Search::new(instance);
    let mut solution = None;
    let servable = instance.demand().iter().all(|&a| a as f64 <= instance.capacity());
    for k in instance.facility_lower_bound()..=n {
        if !servable {
            break;
        }
        let nearest = vec![f64::INFINITY; n];
        if let Some(sol) = search.descend(k, 0, &mut Vec::with_capacity(k), &nearest) {
            solution = Some(sol);
            break;
        }
    }
    SolveReport {
        solution: solution.unwrap_or_else(|| FacilitySolution::infeasible(n)),
        nodes_explored: search.nodes,
        subproblems_checked: search.checked,
        wall_time: start.elapsed(),
    }
}

/// Plain depth-first search over every nearest-facility choice, sites in
/// index order. Shares nothing with [`assign_feasible`] beyond the
/// instance's nearest-open rule.
pub fn brute_force_assignment(instance: &FacilityInstance, open_set: &[usize]) -> Option<Vec<usize>> {
    fn go(
        instance: &FacilityInstance,
        choices: &[Vec<usize>],
        x: usize,
        load: &mut [f64],
        out: &mut Vec<usize>,
    ) -> bool {
        if x == choices.len() {
            return true;
        }
        let a = instance.demand()[x] as f64;
        for &y in &choices[x] {
            if load[y] + a <= instance.capacity() {
                load[y] += a;
                out.push(y);
                if go(instance, choices, x + 1, load, out) {
                    return true;
                }
                out.pop();
                load[y] -= a;
            }
        }
        false
    }
    if open_set.is_empty() {
        return None;
    }
    let n = instance.len();
    let choices: Vec<Vec<usize>> = (0..n).map(|x| instance.nearest_open(x, open_set)).collect();
    let mut out = Vec::with_capacity(n);
    go(instance, &choices, 0, &mut vec![0.0; n], &mut out).then_some(out)
}

/// Optimum by enumerating all `2^n - 1` open sets with [`DEFAULT_ORACLE_CAP`].
pub fn exhaustive_solve(instance: &FacilityInstance) -> Result<SolveReport> {
    exhaustive_solve_with_cap(instance, DEFAULT_ORACLE_CAP)
}

pub fn exhaustive_solve_with_cap(instance: &FacilityInstance, cap: usize) -> Result<SolveReport> {
    let n = instance.len();
    if n > cap || n >= 64 {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    let start = Instant::now();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut checked = 0;
    for mask in 1u64..(1u64 << n) {
        let open: Vec<usize> = (0..n).filter(|&y| mask >> y & 1 == 1).collect();
        if let Some((b, _)) = &best {
            if open.len() > b.len() || (open.len() == b.len() && open >= *b) {
                continue;
            }
        }
        checked += 1;
        if let Some(assign) = brute_force_assignment(instance, &open) {
            best = Some((open, assign));
        }
    }
    Ok(SolveReport {
        solution: best
            .map(|(open, assign)| FacilitySolution::from_assignment(instance, &open, &assign))
            .unwrap_or_else(|| FacilitySolution::infeasible(n)),
        nodes_explored: (1u64 << n) - 1,
        subproblems_checked: checked,
        wall_time: start.elapsed(),
    })
}

/// Combination-by-combination enumeration of open sets of size
/// `1..=max_open`, smallest size first. Usable on instances beyond the
/// oracle cap when the optimum is known to be small. Returns `None` when no
/// set of at most `max_open` sites is feasible.
pub fn exhaustive_solve_up_to(instance: &FacilityInstance, max_open: usize) -> Option<FacilitySolution> {
    let n = instance.len();
    for k in 1..=max_open.min(n) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if let Some(assign) = brute_force_assignment(instance, &idx) {
                return Some(FacilitySolution::from_assignment(instance, &idx, &assign));
            }
            // next combination in lexicographic order
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
                break;
            };
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}
