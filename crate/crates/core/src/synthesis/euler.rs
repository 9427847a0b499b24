//! Eulerian circuits on the support multigraph of a profile.
//!
//! Vertices are the (ell-1)-words; word `w` is an edge from its prefix to its
//! suffix, repeated `p(w)` times. A closed walk covering every edge copy once
//! spells a circular string whose profile is exactly `p`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::compact::{CompactString, Segment};
use crate::error::{Error, Result};
use crate::profile::ProfileVector;

fn require_flow(p: &ProfileVector) -> Result<()> {
    if p.counts().iter().all(Zero::is_zero) {
        return Err(Error::ZeroProfile);
    }
    if p.params().ell >= 2 {
        if let Some(w) = p.flow_violation()? {
            return Err(Error::NotFlowConserving(w.to_string()));
        }
    }
    Ok(())
}

/// Strong connectivity of the support graph, ignoring isolated vertices.
pub fn check_connectivity(p: &ProfileVector) -> Result<bool> {
    require_flow(p)?;
    let params = p.params();
    let nodes = params.num_nodes();
    let live: Vec<bool> = p.counts().iter().map(|c| !c.is_zero()).collect();
    let mut touched = vec![false; nodes];
    for (w, _) in live.iter().enumerate().filter(|(_, &l)| l) {
        touched[params.edge_tail(w)] = true;
        touched[params.edge_head(w)] = true;
    }
    let start = touched.iter().position(|&t| t).expect("nonzero profile");
    let reach = |forward: bool| {
        let mut seen = vec![false; nodes];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for sigma in 0..params.q {
                let (w, next) = if forward {
                    let w = params.out_edge(v, sigma);
                    (w, params.edge_head(w))
                } else {
                    let w = params.in_edge(v, sigma);
                    (w, params.edge_tail(w))
                };
                if live[w] && !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let bwd = reach(false);
    Ok((0..nodes).all(|v| !touched[v] || (fwd[v] && bwd[v])))
}

/// Hierholzer's algorithm, consuming out-edges in lexicographic order from
/// the smallest vertex with an outgoing edge.
pub fn eulerian_string(p: &ProfileVector) -> Result<Vec<u8>> {
    if !check_connectivity(p)? {
        return Err(Error::NotConnected);
    }
    let params = p.params();
    let mut remaining: Vec<u64> = p
        .to_u64()
        .ok_or_else(|| Error::InvalidParams("profile too large to materialize".into()))?;
    let total: u64 = remaining.iter().sum();
    let total = usize::try_from(total).map_err(|_| Error::InvalidParams("profile too large".into()))?;
    let start = (0..params.num_words())
        .find(|&w| remaining[w] > 0)
        .map(|w| params.edge_tail(w))
        .expect("nonzero profile");

    let mut next_sigma = vec![0usize; params.num_nodes()];
    // Stack of (vertex, symbol of the edge used to enter it).
    let mut stack: Vec<(usize, u8)> = vec![(start, 0)];
    let mut circuit: Vec<u8> = Vec::with_capacity(total);
    while let Some(&(v, _)) = stack.last() {
        while next_sigma[v] < params.q && remaining[params.out_edge(v, next_sigma[v])] == 0 {
            next_sigma[v] += 1;
        }
        if next_sigma[v] < params.q {
            let w = params.out_edge(v, next_sigma[v]);
            remaining[w] -= 1;
            stack.push((params.edge_head(w), next_sigma[v] as u8));
        } else {
            let (_, sym) = stack.pop().expect("nonempty");
            if !stack.is_empty() {
                circuit.push(sym);
            }
        }
    }
    circuit.reverse();
    debug_assert_eq!(circuit.len(), total);
    Ok(circuit)
}

/// Simple cycles with multiplicities whose sum is the edge multiset of `p`.
///
/// Each step walks lexicographically along edges with residual count from
/// the smallest vertex that still has one, cuts out the first closed loop and
/// subtracts its bottleneck, so at most `q^ell` cycles are produced.
pub fn cycle_decomposition(p: &ProfileVector) -> Result<Vec<(Vec<usize>, BigUint)>> {
    require_flow(p)?;
    let params = p.params();
    let mut residual: Vec<BigUint> = p.counts().to_vec();
    let mut cycles = Vec::new();
    while let Some(first) = residual.iter().position(|c| !c.is_zero()) {
        let mut v = params.edge_tail(first);
        let mut pos: HashMap<usize, usize> = HashMap::new();
        let mut edges: Vec<usize> = Vec::new();
        let cycle = loop {
            if let Some(&k) = pos.get(&v) {
                break edges.split_off(k);
            }
            pos.insert(v, edges.len());
            let w = (0..params.q)
                .map(|s| params.out_edge(v, s))
                .find(|&w| !residual[w].is_zero())
                .ok_or_else(|| Error::Internal("flow walk got stuck".into()))?;
            edges.push(w);
            v = params.edge_head(w);
        };
        let m = cycle.iter().map(|&w| residual[w].clone()).min().expect("nonempty cycle");
        for &w in &cycle {
            residual[w] -= &m;
        }
        cycles.push((cycle, m));
    }
    Ok(cycles)
}

/// Eulerian circuit in compressed form, suitable for profiles whose total
/// is far too large to spell out.
///
/// The cycles of [`cycle_decomposition`] are hung on a spanning tree: each
/// cycle is attached to an earlier one at a shared vertex, and its walk is
/// spliced into the first traversal of its parent. A cycle of multiplicity
/// `m` contributes one traversal with its children followed by `m - 1`
/// repetitions of itself.
pub fn eulerian_compact(p: &ProfileVector) -> Result<CompactString> {
    let params = p.params();
    let cycles = cycle_decomposition(p)?;
    let n = cycles.len();
    let tails: Vec<Vec<usize>> = cycles
        .iter()
        .map(|(c, _)| c.iter().map(|&w| params.edge_tail(w)).collect())
        .collect();

    // owner[v] = (cycle, position) of the first attached cycle passing through v.
    let mut owner: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut attached = vec![false; n];
    // children[c][pos] = cycles hung at position pos of cycle c, with their entry vertex.
    let mut children: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); n];
    let mut entry = vec![0usize; n];
    attached[0] = true;
    for (i, &v) in tails[0].iter().enumerate() {
        owner.entry(v).or_insert((0, i));
    }
    let mut progress = true;
    while progress {
        progress = false;
        for c in 1..n {
            if attached[c] {
                continue;
            }
            let Some((i, &(parent, pos))) =
                tails[c].iter().enumerate().find_map(|(i, v)| owner.get(v).map(|o| (i, o)))
            else {
                continue;
            };
            attached[c] = true;
            entry[c] = i;
            children[parent].entry(pos).or_default().push(c);
            for (j, &v) in tails[c].iter().enumerate() {
                owner.entry(v).or_insert((c, j));
            }
            progress = true;
        }
    }
    if attached.iter().any(|a| !a) {
        return Err(Error::NotConnected);
    }

    let symbol = |w: usize| (w % params.q) as u8;
    // Builds bottom-up so deep trees do not recurse.
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        order.push(c);
        for kids in children[c].values() {
            stack.extend(kids);
        }
    }
    let mut built: Vec<Option<Segment>> = vec![None; n];
    for &c in order.iter().rev() {
        let (edges, mult) = &cycles[c];
        let len = edges.len();
        let start = entry[c];
        let mut parts: Vec<Segment> = Vec::new();
        let mut lit: Vec<u8> = Vec::new();
        for k in 0..len {
            let i = (start + k) % len;
            if let Some(kids) = children[c].get(&i) {
                if !lit.is_empty() {
                    parts.push(Segment::Lit(std::mem::take(&mut lit)));
                }
                parts.extend(kids.iter().map(|&kid| built[kid].take().expect("child built first")));
            }
            lit.push(symbol(edges[i]));
        }
        parts.push(Segment::Lit(lit));
        let plain: Vec<u8> = (0..len).map(|k| symbol(edges[(start + k) % len])).collect();
        let rest = mult - BigUint::one();
        if !rest.is_zero() {
            parts.push(Segment::Repeat(Box::new(Segment::Lit(plain)), rest));
        }
        built[c] = Some(Segment::Concat(parts));
    }
    let root = built[0].take().expect("root built");
    Ok(CompactString::new(params.q, root))
}
