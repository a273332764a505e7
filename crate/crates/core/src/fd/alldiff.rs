use crate::engine::{Ctx, PropStatus, Propagator};
use crate::fd::IntDomain;
use crate::store::{Contradiction, IntVar, VarId};

/// Above this many (variable, value) pairs the value graph is not built and
/// the propagator falls back to removing fixed values from the others.
const MAX_EDGES: u64 = 1 << 20;

/// Arc-consistent AllDifferent: maximum matching on the variable/value graph,
/// then removal of every edge that lies on no alternating cycle or even
/// alternating path (found as strongly connected components).
pub struct AllDifferent {
    vars: Vec<IntVar>,
}

impl AllDifferent {
    pub fn new(vars: Vec<IntVar>) -> AllDifferent {
        AllDifferent { vars }
    }

    /// Removes each fixed value from the other variables until no new
    /// variable gets fixed.
    fn forward_check(&self, ctx: &mut Ctx<'_>) -> Result<(), Contradiction> {
        let mut done = vec![false; self.vars.len()];
        loop {
            let mut progress = false;
            for (i, &v) in self.vars.iter().enumerate() {
                if done[i] {
                    continue;
                }
                let Some(x) = ctx.store.dom(v).value() else {
                    continue;
                };
                done[i] = true;
                progress = true;
                for (j, &w) in self.vars.iter().enumerate() {
                    if j != i {
                        ctx.store.int_remove(w, x)?;
                    }
                }
            }
            if !progress {
                return Ok(());
            }
        }
    }
}

impl Propagator for AllDifferent {
    fn name(&self) -> &'static str {
        "alldifferent"
    }

    fn watched(&self) -> Vec<VarId> {
        self.vars.iter().map(|&v| VarId::Int(v)).collect()
    }

    fn propagate(&self, ctx: &mut Ctx<'_>) -> Result<PropStatus, Contradiction> {
        let doms: Vec<IntDomain> = self
            .vars
            .iter()
            .map(|&v| ctx.store.dom(v).clone())
            .collect();
        let edges: u64 = doms.iter().map(IntDomain::size).sum();
        if edges > MAX_EDGES {
            self.forward_check(ctx)?;
        } else {
            let keep = filter(&doms)?;
            for (i, &v) in self.vars.iter().enumerate() {
                let k = &keep[i];
                ctx.store.int_retain(v, |x| k.binary_search(&x).is_ok())?;
            }
        }
        if self.vars.iter().all(|&v| ctx.store.dom(v).is_fixed()) {
            Ok(PropStatus::Entailed)
        } else {
            Ok(PropStatus::Active)
        }
    }
}

/// Values of each domain that belong to some solution of AllDifferent, in
/// ascending order. Exposed for testing against a brute-force oracle.
pub fn filter(doms: &[IntDomain]) -> Result<Vec<Vec<i64>>, Contradiction> {
    let n = doms.len();
    let mut values: Vec<i64> = doms.iter().flat_map(|d| d.values()).collect();
    values.sort_unstable();
    values.dedup();
    let m = values.len();
    if m < n {
        return Err(Contradiction);
    }
    let adj: Vec<Vec<usize>> = doms
        .iter()
        .map(|d| {
            d.values()
                .map(|x| values.binary_search(&x).unwrap())
                .collect()
        })
        .collect();

    let (var_match, val_match) = max_matching(&adj, m);
    if var_match.iter().any(Option::is_none) {
        return Err(Contradiction);
    }

    // Nodes: variables 0..n, values n..n+m, sink n+m.
    let sink = n + m;
    let mut graph: Vec<Vec<usize>> = vec![Vec::new(); n + m + 1];
    for (i, vals) in adj.iter().enumerate() {
        let mi = var_match[i].unwrap();
        for &j in vals {
            if j == mi {
                graph[n + j].push(i);
            } else {
                graph[i].push(n + j);
            }
        }
    }
    for j in 0..m {
        if val_match[j].is_some() {
            graph[sink].push(n + j);
        } else {
            graph[n + j].push(sink);
        }
    }
    let comp = scc(&graph);

    Ok(adj
        .iter()
        .enumerate()
        .map(|(i, vals)| {
            let mi = var_match[i].unwrap();
            vals.iter()
                .filter(|&&j| j == mi || comp[i] == comp[n + j])
                .map(|&j| values[j])
                .collect()
        })
        .collect())
}

/// Augmenting-path maximum matching. Returns the matched value per variable
/// and the matched variable per value.
fn max_matching(adj: &[Vec<usize>], m: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut var_match = vec![None; n];
    let mut val_match: Vec<Option<usize>> = vec![None; m];
    // Greedy start.
    for i in 0..n {
        if let Some(&j) = adj[i].iter().find(|&&j| val_match[j].is_none()) {
            var_match[i] = Some(j);
            val_match[j] = Some(i);
        }
    }
    let mut seen = vec![0usize; m];
    let mut stamp = 0;
    for root in 0..n {
        if var_match[root].is_some() {
            continue;
        }
        stamp += 1;
        // Iterative DFS over (variable, next edge) frames.
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut path: Vec<usize> = Vec::new();
        let mut found = None;
        while let Some(&mut (i, ref mut e)) = stack.last_mut() {
            if *e >= adj[i].len() {
                stack.pop();
                path.pop();
                continue;
            }
            let j = adj[i][*e];
            *e += 1;
            if seen[j] == stamp {
                continue;
            }
            seen[j] = stamp;
            path.push(j);
            match val_match[j] {
                None => {
                    found = Some(());
                    break;
                }
                Some(k) => stack.push((k, 0)),
            }
        }
        if found.is_some() {
            // stack[d].0 is the variable that takes path[d].
            for (d, &(i, _)) in stack.iter().enumerate() {
                let j = path[d];
                var_match[i] = Some(j);
                val_match[j] = Some(i);
            }
        }
    }
    (var_match, val_match)
}

/// Tarjan's strongly connected components, iterative.
fn scc(graph: &[Vec<usize>]) -> Vec<usize> {
    let n = graph.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (u, ref mut e)) = call.last_mut() {
            if *e < graph[u].len() {
                let w = graph[u][*e];
                *e += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == u {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}
