//! Test helpers shared by the integration tests of several crates.
//!
//! The point evaluator below uses plain `f64` library calls and shares no
//! code with the interval implementation, so it can act as an independent
//! reference.

#![allow(dead_code)]

use hybridcp::expr::{Expr, RelOp, Relation};
use hybridcp::fd::IntDomain;
use hybridcp::interval::{BinaryOp, UnaryOp};
use hybridcp::real::update_bounds;
use hybridcp::store::Store;
use hybridcp::Interval;
use hybridcp::{ContractStatus, ContractorRegistry, IntVar, RealTerm, RealVar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn eval_point(e: &Expr, x: &[f64]) -> f64 {
    match e {
        Expr::Const(c) => *c,
        Expr::Var(k) => x[*k],
        Expr::Unary(op, a) => unary_point(*op, eval_point(a, x)),
        Expr::Binary(op, a, b) => binary_point(*op, eval_point(a, x), eval_point(b, x)),
    }
}

pub fn unary_point(op: UnaryOp, v: f64) -> f64 {
    match op {
        UnaryOp::Neg => -v,
        UnaryOp::Sign => {
            if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else if v == 0.0 {
                0.0
            } else {
                f64::NAN
            }
        }
        UnaryOp::Abs => v.abs(),
        UnaryOp::Sqr => v * v,
        UnaryOp::Sqrt => v.sqrt(),
        UnaryOp::Exp => v.exp(),
        UnaryOp::Log => v.ln(),
        UnaryOp::Cos => v.cos(),
        UnaryOp::Sin => v.sin(),
        UnaryOp::Tan => v.tan(),
        UnaryOp::Acos => v.acos(),
        UnaryOp::Asin => v.asin(),
        UnaryOp::Atan => v.atan(),
        UnaryOp::Cosh => v.cosh(),
        UnaryOp::Sinh => v.sinh(),
        UnaryOp::Tanh => v.tanh(),
        UnaryOp::Acosh => v.acosh(),
        UnaryOp::Asinh => v.asinh(),
        UnaryOp::Atanh => 0.5 * (v.ln_1p() - (-v).ln_1p()),
    }
}

pub fn binary_point(op: BinaryOp, a: f64, b: f64) -> f64 {
    match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => a / b,
        // f64::min/max drop a NaN operand; an undefined argument must stay undefined
        BinaryOp::Min if a.is_nan() || b.is_nan() => f64::NAN,
        BinaryOp::Max if a.is_nan() || b.is_nan() => f64::NAN,
        BinaryOp::Min => a.min(b),
        BinaryOp::Max => a.max(b),
        BinaryOp::Pow => {
            if a < 0.0 && b.fract() != 0.0 {
                f64::NAN
            } else {
                a.powf(b)
            }
        }
        BinaryOp::Atan2 => a.atan2(b),
    }
}

/// Distance in units in the last place, counting every double between
/// `a` and `b` (signed zeros identified).
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    fn key(x: f64) -> i64 {
        let x = if x == 0.0 { 0.0 } else { x };
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    key(a).abs_diff(key(b))
}

const RELOPS: [RelOp; 5] = [RelOp::Eq, RelOp::Lt, RelOp::Gt, RelOp::Le, RelOp::Ge];

fn random_const<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(-5..=5) as f64,
        1 => rng.gen_range(1..=3) as f64,
        2 => (rng.gen_range(-100.0f64..100.0) * 10.0).round() / 100.0,
        _ => rng.gen_range(-2.0..2.0),
    }
}

/// Random expression of depth at most `depth` over variables `0..arity`.
pub fn random_expr<R: Rng>(rng: &mut R, depth: usize, arity: usize) -> Expr {
    if depth <= 1 || rng.gen_bool(0.25) {
        return if arity > 0 && rng.gen_bool(0.7) {
            Expr::Var(rng.gen_range(0..arity))
        } else {
            Expr::Const(random_const(rng))
        };
    }
    if rng.gen_bool(0.4) {
        let op = UnaryOp::ALL[rng.gen_range(0..UnaryOp::ALL.len())];
        Expr::unary(op, random_expr(rng, depth - 1, arity))
    } else {
        let op = BinaryOp::ALL[rng.gen_range(0..BinaryOp::ALL.len())];
        let a = random_expr(rng, depth - 1, arity);
        // Small integer exponents keep pow interesting on negative bases.
        let b = if op == BinaryOp::Pow && rng.gen_bool(0.6) {
            Expr::Const(rng.gen_range(-2..=4) as f64)
        } else {
            random_expr(rng, depth - 1, arity)
        };
        Expr::binary(op, a, b)
    }
}

pub fn random_relation<R: Rng>(rng: &mut R, arity: usize, depth: usize) -> Relation {
    let op = RELOPS[rng.gen_range(0..RELOPS.len())];
    let lhs = random_expr(rng, depth, arity);
    let rhs = if rng.gen_bool(0.3) {
        Expr::Const(random_const(rng))
    } else {
        random_expr(rng, depth, arity)
    };
    Relation::new(lhs, op, rhs)
}

pub fn random_box<R: Rng>(rng: &mut R, arity: usize) -> Vec<f64> {
    let mut b = Vec::with_capacity(2 * arity);
    for _ in 0..arity {
        let c = rng.gen_range(-6.0..6.0);
        let w = match rng.gen_range(0..3) {
            0 => rng.gen_range(0.0..0.5),
            1 => rng.gen_range(0.0..3.0),
            _ => rng.gen_range(0.0..10.0),
        };
        b.push(c - w / 2.0);
        b.push(c + w / 2.0);
    }
    b
}

pub fn sample_box<R: Rng>(rng: &mut R, bounds: &[f64]) -> Vec<f64> {
    bounds
        .chunks_exact(2)
        .map(|p| {
            if p[0] == p[1] {
                p[0]
            } else {
                rng.gen_range(p[0]..=p[1])
            }
        })
        .collect()
}

fn inside(bounds: &[f64], x: &[f64]) -> bool {
    x.iter()
        .enumerate()
        .all(|(k, &v)| bounds[2 * k] <= v && v <= bounds[2 * k + 1])
}

/// Slack for floating-point evaluation error of the reference evaluator.
fn margin(l: f64, r: f64) -> f64 {
    1e-7 * (1.0 + l.abs() + r.abs())
}

/// Pointwise truth with a safety margin: `Some(true)` if the relation
/// clearly holds, `Some(false)` if it clearly fails, `None` if undefined or
/// too close to call.
pub fn robust_truth(r: &Relation, x: &[f64]) -> Option<bool> {
    let l = eval_point(&r.lhs, x);
    let v = eval_point(&r.rhs, x);
    if !l.is_finite() || !v.is_finite() {
        return None;
    }
    let m = margin(l, v);
    let d = l - v;
    match r.op {
        RelOp::Le | RelOp::Lt => {
            if d < -m {
                Some(true)
            } else if d > m {
                Some(false)
            } else {
                None
            }
        }
        RelOp::Ge | RelOp::Gt => {
            if d > m {
                Some(true)
            } else if d < -m {
                Some(false)
            } else {
                None
            }
        }
        RelOp::Eq => {
            if d.abs() > m {
                Some(false)
            } else {
                None
            }
        }
    }
}

fn signed_gap(r: &Relation, x: &[f64]) -> Option<f64> {
    let l = eval_point(&r.lhs, x);
    let v = eval_point(&r.rhs, x);
    (l.is_finite() && v.is_finite()).then_some(l - v)
}

/// Searches the segment `p..q` for an exact root of `lhs - rhs`. Both ends
/// must have a clear, opposite sign; bisection then shrinks the bracket and
/// the result is kept only if the gap is small at both final ends (so a
/// pole or jump is not mistaken for a root).
pub fn root_bracket(r: &Relation, p: &[f64], q: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let gp = signed_gap(r, p)?;
    let gq = signed_gap(r, q)?;
    if gp.abs() <= margin(gp, 0.0) || gq.abs() <= margin(gq, 0.0) || (gp > 0.0) == (gq > 0.0) {
        return None;
    }
    let at = |t: f64| -> Vec<f64> { p.iter().zip(q).map(|(a, b)| a + t * (b - a)).collect() };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let neg_at_lo = gp < 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let g = signed_gap(r, &at(mid))?;
        if g == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (g < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (at(lo), at(hi));
    let ga = signed_gap(r, &a)?;
    let gb = signed_gap(r, &b)?;
    let scale = 1.0 + eval_point(&r.lhs, &a).abs() + eval_point(&r.rhs, &a).abs();
    if ga.abs() > 1e-6 * scale || gb.abs() > 1e-6 * scale {
        return None;
    }
    Some((a, b))
}

/// Whether the axis-aligned hull of `a` and `b`, padded for the rounding
/// error of the reference evaluator, meets the box.
fn hull_meets(bounds: &[f64], a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).enumerate().all(|(k, (&x, &y))| {
        let pad = 1e-9 * (1.0 + x.abs());
        let (lo, hi) = (x.min(y) - pad, x.max(y) + pad);
        lo <= bounds[2 * k + 1] && hi >= bounds[2 * k]
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    /// A clearly satisfying point (or a bracketed root) lost by contraction.
    pub removed: usize,
    /// FAIL returned although a solution was found.
    pub fail_with_solution: usize,
    /// ENTAILED returned for an inequality although a sample of the output
    /// box clearly violates it.
    pub entailed_violated: usize,
    /// Output box not inside the input box.
    pub grew: usize,
    /// Solutions (points or bracketed roots) used as witnesses.
    pub witnesses: usize,
    pub status: [usize; 4],
}

impl SoundnessReport {
    pub fn violations(&self) -> usize {
        self.removed + self.fail_with_solution + self.entailed_violated + self.grew
    }

    pub fn merge(&mut self, o: &SoundnessReport) {
        self.removed += o.removed;
        self.fail_with_solution += o.fail_with_solution;
        self.entailed_violated += o.entailed_violated;
        self.grew += o.grew;
        self.witnesses += o.witnesses;
        for i in 0..4 {
            self.status[i] += o.status[i];
        }
    }
}

/// Contracts `input` with a single-relation contractor and checks it
/// against `samples` random points of the input box (and of the output box
/// for entailment).
pub fn check_instance<R: Rng>(
    rng: &mut R,
    relation: &Relation,
    input: &[f64],
    samples: usize,
) -> SoundnessReport {
    let arity = input.len() / 2;
    let mut reg = ContractorRegistry::new();
    let id = reg
        .create_contractor(&[relation.to_string()], arity)
        .expect("generated relation must parse");
    let mut out = input.to_vec();
    let status = reg.contract(id, &mut out).expect("valid bounds");
    let mut rep = SoundnessReport::default();
    rep.status[status.code() as usize] += 1;
    let failed = status == ContractStatus::Fail;

    if !failed {
        for k in 0..arity {
            if out[2 * k] < input[2 * k] || out[2 * k + 1] > input[2 * k + 1] {
                rep.grew += 1;
            }
        }
    }

    let mut prev: Option<Vec<f64>> = None;
    for _ in 0..samples {
        let x = sample_box(rng, input);
        let solution = relation.op != RelOp::Eq && robust_truth(relation, &x) == Some(true);
        if solution {
            rep.witnesses += 1;
            if failed {
                rep.fail_with_solution += 1;
            } else if !inside(&out, &x) {
                rep.removed += 1;
            }
        }
        if relation.op == RelOp::Eq {
            if let Some(p) = &prev {
                if let Some((a, b)) = root_bracket(relation, p, &x) {
                    rep.witnesses += 1;
                    if failed {
                        rep.fail_with_solution += 1;
                    } else if !hull_meets(&out, &a, &b) {
                        rep.removed += 1;
                    }
                }
            }
        }
        prev = Some(x);
    }

    if status == ContractStatus::Entailed && relation.op != RelOp::Eq {
        for _ in 0..samples {
            let x = sample_box(rng, &out);
            if robust_truth(relation, &x) == Some(false) {
                rep.entailed_violated += 1;
            }
        }
    }
    rep
}

/// A pure finite-domain model kept in plain data so it can be solved both
/// by the solver and by enumeration.
#[derive(Clone, Debug)]
pub struct FdSpec {
    /// Domain of each variable, sorted; `bounded` vars are full ranges.
    pub domains: Vec<Vec<i64>>,
    pub bounded: Vec<bool>,
    pub constraints: Vec<FdConstraint>,
}

#[derive(Clone, Debug)]
pub enum FdConstraint {
    AllDifferent(Vec<usize>),
    /// `x[value] = table[x[index]]`
    Element {
        value: usize,
        table: Vec<i64>,
        index: usize,
    },
    /// `sum(x[vars]) = x[total]`
    Sum {
        vars: Vec<usize>,
        total: usize,
    },
}

impl FdConstraint {
    pub fn holds(&self, x: &[i64]) -> bool {
        match self {
            FdConstraint::AllDifferent(vs) => {
                let mut seen: Vec<i64> = vs.iter().map(|&v| x[v]).collect();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
            FdConstraint::Element {
                value,
                table,
                index,
            } => {
                let i = x[*index];
                i >= 0 && (i as usize) < table.len() && table[i as usize] == x[*value]
            }
            FdConstraint::Sum { vars, total } => {
                vars.iter().map(|&v| x[v]).sum::<i64>() == x[*total]
            }
        }
    }
}

/// At most 5 variables with at most 8 values each, and 1 to 3 constraints.
pub fn random_fd_spec<R: Rng>(rng: &mut R) -> FdSpec {
    let n = rng.gen_range(2..=5);
    let mut domains = Vec::with_capacity(n);
    let mut bounded = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.gen_bool(0.3) {
            let lo = rng.gen_range(-2..6);
            let len = rng.gen_range(1..=8);
            domains.push((lo..lo + len).collect());
            bounded.push(true);
        } else {
            let mut vals: Vec<i64> = (-2..10).filter(|_| rng.gen_bool(0.5)).collect();
            vals.truncate(8);
            if vals.is_empty() {
                vals.push(rng.gen_range(-2..10));
            }
            domains.push(vals);
            bounded.push(false);
        }
    }
    let mut constraints = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let c = match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(2..=n);
                let mut vs: Vec<usize> = (0..n).collect();
                for i in 0..k {
                    let j = rng.gen_range(i..n);
                    vs.swap(i, j);
                }
                vs.truncate(k);
                FdConstraint::AllDifferent(vs)
            }
            1 => {
                let index = rng.gen_range(0..n);
                let value = (index + rng.gen_range(1..n)) % n;
                let table = (0..rng.gen_range(1..=6))
                    .map(|_| rng.gen_range(-2..10))
                    .collect();
                FdConstraint::Element {
                    value,
                    table,
                    index,
                }
            }
            _ => {
                let total = rng.gen_range(0..n);
                let vars = (0..n)
                    .filter(|&v| v != total && rng.gen_bool(0.6))
                    .collect();
                FdConstraint::Sum { vars, total }
            }
        };
        constraints.push(c);
    }
    FdSpec {
        domains,
        bounded,
        constraints,
    }
}

impl FdSpec {
    pub fn build(&self) -> (hybridcp::Model, Vec<hybridcp::IntVar>) {
        let mut m = hybridcp::Model::new();
        let vars: Vec<_> = self
            .domains
            .iter()
            .zip(&self.bounded)
            .enumerate()
            .map(|(i, (d, &b))| {
                let name = format!("x{i}");
                if b {
                    m.int_var(&name, d[0], *d.last().unwrap()).unwrap()
                } else {
                    m.int_var_values(&name, d).unwrap()
                }
            })
            .collect();
        for c in &self.constraints {
            match c {
                FdConstraint::AllDifferent(vs) => {
                    let xs: Vec<_> = vs.iter().map(|&v| vars[v]).collect();
                    m.all_different(&xs);
                }
                FdConstraint::Element {
                    value,
                    table,
                    index,
                } => {
                    m.element(vars[*value], table, vars[*index]).unwrap();
                }
                FdConstraint::Sum { vars: vs, total } => {
                    let xs: Vec<_> = vs.iter().map(|&v| vars[v]).collect();
                    m.sum(&xs, vars[*total]);
                }
            }
        }
        (m, vars)
    }

    /// Every satisfying tuple, in lexicographic order.
    pub fn brute_force(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut x = vec![0; self.domains.len()];
        self.enumerate(0, &mut x, &mut out);
        out
    }

    fn enumerate(&self, k: usize, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == x.len() {
            if self.constraints.iter().all(|c| c.holds(x)) {
                out.push(x.clone());
            }
            return;
        }
        for &v in &self.domains[k] {
            x[k] = v;
            self.enumerate(k + 1, x, out);
        }
    }
}

/// Compares solver enumeration and branch-and-bound against brute force.
/// Returns a description of the first mismatch.
pub fn check_fd_spec(spec: &FdSpec, objective: usize) -> Result<(), String> {
    let expected = spec.brute_force();
    let (m, _) = spec.build();
    let mut s = m.solver(hybridcp::SearchConfig {
        check_restore: true,
        ..Default::default()
    });
    let (sols, done) = s.all_solutions();
    if !done {
        return Err("enumeration did not finish".into());
    }
    let mut got: Vec<Vec<i64>> = sols.into_iter().map(|s| s.ints).collect();
    got.sort();
    if got != expected {
        return Err(format!("solutions {got:?}, brute force {expected:?}"));
    }
    if s.restore_violations() != 0 {
        return Err("state not restored on backtrack".into());
    }

    let (m, vars) = spec.build();
    let mut s = m.solver(Default::default());
    let out = s.minimize(hybridcp::Objective::Int(vars[objective]), |_| {});
    if !out.proven {
        return Err("minimize did not prove optimality".into());
    }
    let best = expected.iter().map(|x| x[objective]).min();
    let got = out.best.map(|b| b.ints[objective]);
    if got != best {
        return Err(format!("optimum {got:?}, brute force {best:?}"));
    }
    Ok(())
}

/// Arc consistency by enumeration: the values of each variable that extend
/// to an all-different tuple. `None` if there is no such tuple.
pub fn brute_force_alldiff(doms: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    fn go(k: usize, doms: &[Vec<i64>], used: &mut Vec<i64>, support: &mut [Vec<i64>]) {
        if k == doms.len() {
            for (s, &v) in support.iter_mut().zip(used.iter()) {
                if !s.contains(&v) {
                    s.push(v);
                }
            }
            return;
        }
        for &v in &doms[k] {
            if !used.contains(&v) {
                used.push(v);
                go(k + 1, doms, used, support);
                used.pop();
            }
        }
    }
    let mut support = vec![Vec::new(); doms.len()];
    go(0, doms, &mut Vec::new(), &mut support);
    if support.iter().any(|s| s.is_empty()) {
        return None;
    }
    for s in &mut support {
        s.sort_unstable();
    }
    Some(support)
}

pub fn random_alldiff_domains<R: Rng>(rng: &mut R) -> Vec<Vec<i64>> {
    let n = rng.gen_range(1..=6);
    let span = rng.gen_range(n as i64..=10);
    (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=8usize);
            let mut vals: Vec<i64> = (0..span).collect();
            for i in 0..vals.len() {
                let j = rng.gen_range(i..vals.len());
                vals.swap(i, j);
            }
            vals.truncate(size);
            vals.sort_unstable();
            vals
        })
        .collect()
}

pub const MAX_ULPS: u64 = 4;

fn hex(s: &serde_json::Value) -> f64 {
    f64::from_bits(u64::from_str_radix(s.as_str().unwrap(), 16).unwrap())
}

fn pair(v: &serde_json::Value) -> Interval {
    Interval::new(hex(&v[0]), hex(&v[1]))
}

fn op_by_name(name: &str) -> Result<UnaryOp, BinaryOp> {
    match name {
        "neg" => Ok(UnaryOp::Neg),
        "add" => Err(BinaryOp::Add),
        "sub" => Err(BinaryOp::Sub),
        "mul" => Err(BinaryOp::Mul),
        "div" => Err(BinaryOp::Div),
        _ => UnaryOp::from_name(name).ok_or_else(|| BinaryOp::from_name(name).unwrap()),
    }
}

fn domain(op: UnaryOp) -> (f64, f64) {
    match op {
        UnaryOp::Sqrt | UnaryOp::Log => (0.0, 100.0),
        UnaryOp::Acos | UnaryOp::Asin | UnaryOp::Atanh => (-1.0, 1.0),
        UnaryOp::Acosh => (1.0, 100.0),
        UnaryOp::Exp | UnaryOp::Cosh | UnaryOp::Sinh => (-40.0, 40.0),
        _ => (-50.0, 50.0),
    }
}

fn random_interval<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Interval {
    let a = rng.gen_range(lo..=hi);
    let w = match rng.gen_range(0..4) {
        0 => 0.0,
        1 => rng.gen_range(0.0..1e-3),
        2 => rng.gen_range(0.0..1.0),
        _ => rng.gen_range(0.0..(hi - lo)),
    };
    Interval::new(a, (a + w).min(hi))
}

fn sample<R: Rng>(rng: &mut R, x: Interval) -> f64 {
    if rng.gen_bool(0.05) {
        return if rng.gen_bool(0.5) { x.lo() } else { x.hi() };
    }
    if x.lo() == x.hi() {
        x.lo()
    } else {
        rng.gen_range(x.lo()..=x.hi())
    }
}

pub fn unary_violations(op: UnaryOp, trials: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = domain(op);
    let mut bad = 0;
    for _ in 0..trials {
        let x = random_interval(&mut rng, lo, hi);
        let p = sample(&mut rng, x);
        let v = unary_point(op, p);
        if v.is_nan() {
            continue;
        }
        if !x.unary(op).contains(v) {
            bad += 1;
        }
    }
    bad
}

pub fn binary_violations(op: BinaryOp, trials: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..trials {
        let (a, b) = match op {
            BinaryOp::Pow if rng.gen_bool(0.5) => {
                let n = rng.gen_range(-4..=6) as f64;
                (random_interval(&mut rng, -5.0, 5.0), Interval::point(n))
            }
            BinaryOp::Pow => (
                random_interval(&mut rng, 0.0, 10.0),
                random_interval(&mut rng, -3.0, 3.0),
            ),
            _ => (
                random_interval(&mut rng, -100.0, 100.0),
                random_interval(&mut rng, -100.0, 100.0),
            ),
        };
        let (x, y) = (sample(&mut rng, a), sample(&mut rng, b));
        let v = binary_point(op, x, y);
        if v.is_nan() {
            continue;
        }
        if !a.binary(op, b).contains(v) {
            bad += 1;
        }
    }
    bad
}

#[derive(Debug, Default)]
pub struct OracleReport {
    pub cases: usize,
    pub worst_ulps: u64,
    /// Cases whose enclosure misses the reference or is looser than
    /// [`MAX_ULPS`].
    pub failures: Vec<String>,
}

/// Compares every operator against the frozen high-precision table.
pub fn check_oracle(data: &serde_json::Value) -> OracleReport {
    let mut rep = OracleReport::default();
    for c in data["cases"].as_array().unwrap() {
        rep.cases += 1;
        let name = c["op"].as_str().unwrap();
        let a = pair(&c["a"]);
        let got = match op_by_name(name) {
            Ok(op) => a.unary(op),
            Err(op) => a.binary(op, pair(&c["b"])),
        };
        let (lo, hi) = (hex(&c["lo"]), hex(&c["hi"]));
        let d = ulp_distance(got.lo(), lo).max(ulp_distance(got.hi(), hi));
        rep.worst_ulps = rep.worst_ulps.max(d);
        if got.lo() > lo || got.hi() < hi {
            rep.failures
                .push(format!("{c}: {got:?} misses [{lo:e}, {hi:e}]"));
        } else if d > MAX_ULPS {
            rep.failures
                .push(format!("{c}: {got:?} is {d} ulps from [{lo:e}, {hi:e}]"));
        }
    }
    rep
}

/// Random interleaving of push, pop and domain changes, checking that every
/// pop restores the snapshot taken at the matching push bit for bit.
pub fn random_trace(seed: u64, steps: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = Store::new();
    let ints: Vec<IntVar> = (0..4)
        .map(|i| {
            if i % 2 == 0 {
                st.new_int(IntDomain::enumerated(-3, 8))
            } else {
                st.new_int(IntDomain::bounded(-3, 8))
            }
        })
        .collect();
    let reals: Vec<RealVar> = (0..2).map(|_| st.new_real(-10.0, 10.0, 1e-3)).collect();
    let mut saved = Vec::new();
    let mut mismatches = 0;
    for _ in 0..steps {
        match rng.gen_range(0..10) {
            0..=2 => {
                saved.push(st.snapshot());
                st.push_level();
            }
            3..=4 if !saved.is_empty() => {
                st.pop_level();
                mismatches += (st.snapshot() != saved.pop().unwrap()) as usize;
            }
            _ if saved.is_empty() => {}
            k => {
                let v = ints[rng.gen_range(0..ints.len())];
                let r = reals[rng.gen_range(0..reals.len())];
                let x = rng.gen_range(-4..10);
                let a = rng.gen_range(-11.0..11.0);
                let b = a + rng.gen_range(0.0..8.0);
                let failed = match k {
                    5 => st.int_remove(v, x).is_err(),
                    6 => st.int_restrict(v, x, x + rng.gen_range(0..5)).is_err(),
                    7 => st.real_restrict(r, a, b, rng.gen_bool(0.5)).is_err(),
                    8 => update_bounds(&mut st, RealTerm::View(v), a, b).is_err(),
                    _ => st.int_retain(v, |y| y % 3 != x.rem_euclid(3)).is_err(),
                };
                if failed {
                    st.pop_level();
                    mismatches += (st.snapshot() != saved.pop().unwrap()) as usize;
                }
            }
        }
    }
    while let Some(s) = saved.pop() {
        st.pop_level();
        mismatches += (st.snapshot() != s) as usize;
    }
    mismatches
}
