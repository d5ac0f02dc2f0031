//! Finite differences over ℤ and the binomial splitting of a norm.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::semiring::Semiring;
use super::{evaluate, SemiringCircuit};
use crate::bispan::fold_distributivity;
use crate::context::{Ambient, Mor};
use crate::error::{Error, Result};

/// Measured degrees of one target coordinate. `None` means the coordinate
/// is the zero function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub total: Option<usize>,
    /// Degree in each source coordinate.
    pub per_variable: Vec<Option<usize>>,
}

/// Values of a function on the box `∏ {0..dims[i]-1}`, row-major.
#[derive(Debug, Clone)]
struct Table {
    dims: Vec<usize>,
    values: Vec<BigInt>,
}

impl Table {
    fn stride(&self, axis: usize) -> usize {
        self.dims[axis + 1..].iter().product()
    }

    /// Forward difference along `axis`; the box shrinks by one there.
    fn difference(&self, axis: usize) -> Table {
        let mut dims = self.dims.clone();
        dims[axis] -= 1;
        let stride = self.stride(axis);
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        for idx in 0..total {
            // Position in the new box, re-expressed in the old one.
            let outer = idx / (stride * dims[axis]);
            let rest = idx % (stride * dims[axis]);
            let old = outer * stride * self.dims[axis] + rest;
            values.push(&self.values[old + stride] - &self.values[old]);
        }
        Table { dims, values }
    }

    fn vanishes(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// Evaluates target `j` of `c` on `{0..=bound}^vars`, the other sources
/// held at zero (they do not occur in `j`).
fn grid_table(c: &SemiringCircuit, j: usize, vars: &[usize], bound: usize) -> Result<Table> {
    let side = bound + 1;
    let dims = vec![side; vars.len()];
    let total = side.pow(vars.len() as u32);
    let mut values = Vec::with_capacity(total);
    let mut point = vec![BigInt::from(0); c.src_arity];
    let single = SemiringCircuit { src_arity: c.src_arity, tgt_arity: 1, terms: vec![c.terms[j].clone()] };
    for idx in 0..total {
        let mut rem = idx;
        for &v in vars.iter().rev() {
            point[v] = BigInt::from(rem % side);
            rem /= side;
        }
        values.push(evaluate(&single, &point)?.pop().expect("one target"));
    }
    Ok(Table { dims, values })
}

/// All multi-indices of the given total order over `k` axes, each entry at
/// most `cap`.
fn multi_indices(k: usize, order: usize, cap: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == k {
            if left <= cap {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for a in (0..=left.min(cap)).rev() {
            cur.push(a);
            go(k, left - a, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(k, order, cap, &mut Vec::new(), &mut out);
    } else if order == 0 {
        out.push(Vec::new());
    }
    out
}

/// Mixed differences `Δ^α f` for every `α` of one order, each derived from
/// a table of the previous order.
struct Level {
    tables: HashMap<Vec<usize>, Table>,
}

impl Level {
    fn base(t: Table) -> Level {
        let k = t.dims.len();
        Level { tables: HashMap::from([(vec![0; k], t)]) }
    }

    fn next(&self, k: usize, order: usize, cap: usize) -> Level {
        let mut tables = HashMap::new();
        for alpha in multi_indices(k, order, cap) {
            let axis = alpha.iter().position(|&a| a > 0).expect("order is positive");
            let mut parent = alpha.clone();
            parent[axis] -= 1;
            let t = self.tables[&parent].difference(axis);
            tables.insert(alpha, t);
        }
        Level { tables }
    }

    fn vanishes(&self) -> bool {
        self.tables.values().all(Table::vanishes)
    }
}

/// The least `n` such that every mixed difference of order `n + 1`
/// vanishes on the grid `{0..=bound}^k` of the variables occurring in
/// target `j`.
fn total_degree(c: &SemiringCircuit, j: usize, bound: usize) -> Result<Option<usize>> {
    let vars = c.variables_of(j);
    let table = grid_table(c, j, &vars, bound)?;
    if table.vanishes() {
        return Ok(None);
    }
    let k = vars.len();
    let mut level = Level::base(table);
    for order in 1..=bound {
        level = level.next(k, order, bound);
        if level.vanishes() {
            return Ok(Some(order - 1));
        }
    }
    Err(Error::BoundTooSmall { bound, needed: bound + 1 })
}

/// Degree in source coordinate `var` alone.
fn variable_degree(c: &SemiringCircuit, j: usize, var: usize, bound: usize) -> Result<Option<usize>> {
    let vars = c.variables_of(j);
    let table = grid_table(c, j, &vars, bound)?;
    if table.vanishes() {
        return Ok(None);
    }
    let Some(axis) = vars.iter().position(|&v| v == var) else { return Ok(Some(0)) };
    let mut t = table;
    for order in 1..=bound {
        t = t.difference(axis);
        if t.vanishes() {
            return Ok(Some(order - 1));
        }
    }
    Err(Error::BoundTooSmall { bound, needed: bound + 1 })
}

/// Per target coordinate, the measured total degree and per-variable
/// degrees. Fails when the grid is too small to certify: a degree `n` is
/// only reported once differences of order `n + 1` are seen to vanish,
/// which needs `bound >= n + 1`.
pub fn finite_difference_degree(c: &SemiringCircuit, bound: usize) -> Result<Vec<DegreeReport>> {
    (0..c.tgt_arity)
        .map(|j| {
            let total = total_degree(c, j, bound)?;
            let per_variable = (0..c.src_arity).map(|v| variable_degree(c, j, v, bound)).collect::<Result<_>>()?;
            Ok(DegreeReport { total, per_variable })
        })
        .collect()
}

/// Whether every mixed difference of the given order vanishes identically
/// on `{0..=bound}^k` for target `j`.
pub fn differences_vanish(c: &SemiringCircuit, j: usize, order: usize, bound: usize) -> Result<bool> {
    if order > bound {
        return Err(Error::BoundTooSmall { bound, needed: order });
    }
    let vars = c.variables_of(j);
    let mut level = Level::base(grid_table(c, j, &vars, bound)?);
    for o in 1..=order {
        level = level.next(vars.len(), o, bound);
    }
    Ok(level.vanishes())
}

/// Outcome of [`check_binomial_splitting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingReport {
    pub probes_checked: usize,
    /// `(probe, z)` pairs with a nonempty fiber, where the three-term
    /// identity was checked.
    pub three_term_checked: usize,
    /// `(probe, z)` pairs with an empty fiber, where the norm is the empty
    /// product on both sides and the cross term vanishes.
    pub empty_fiber_checked: usize,
    pub failure: Option<String>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `p_⊗(E + F) = p_⊗E + k_⊕ ∇_⊗(p̃_L⊗ ε_L^* E, p̃_R⊗ ε_R^* F) + p_⊗F`
/// on each probe pair, with the middle term computed through the pieces of
/// the fold-distributivity diagram. Over an empty fiber both constant
/// sections coincide, so there the identity reads `1 = 1` with a vanishing
/// cross term, and that is what gets checked. The full distributivity
/// formula `g_⊕ p̃_⊗ ε^*` is checked at every point as well.
pub fn check_binomial_splitting<O: Ambient, R: Semiring>(p: &Mor<O>, probes: &[(Vec<R>, Vec<R>)]) -> Result<SplittingReport> {
    let data = fold_distributivity(p)?;
    let nx = p.dom().len();
    let ny = p.cod().len();
    let fibers = p.fibers();
    let mut report = SplittingReport { probes_checked: 0, three_term_checked: 0, empty_fiber_checked: 0, failure: None };
    for (e, f) in probes {
        if e.len() != nx || f.len() != nx {
            return Err(Error::ArityMismatch { expected: nx, got: e.len().min(f.len()) });
        }
        report.probes_checked += 1;
        let sum: Vec<R> = e.iter().zip(f).map(|(a, b)| a.add(b)).collect();
        let norm = |v: &[R]| -> Vec<R> { fibers.iter().map(|fb| R::product(fb.iter().map(|&i| &v[i]))).collect() };
        let (lhs, pe, pf) = (norm(&sum), norm(e), norm(f));

        // Cross term through c: multiply along p̃_L and p̃_R, then add along k.
        let mut on_c = vec![R::one(); data.c.len()];
        for (i, &t) in data.p_tilde_l.map().iter().enumerate() {
            on_c[t] = on_c[t].mul(&e[data.eps_l.apply(i)]);
        }
        for (i, &t) in data.p_tilde_r.map().iter().enumerate() {
            on_c[t] = on_c[t].mul(&f[data.eps_r.apply(i)]);
        }
        let mut cross = vec![R::zero(); ny];
        for (t, &z) in data.k.map().iter().enumerate() {
            cross[z] = cross[z].add(&on_c[t]);
        }

        // The distributivity formula over all of w, on the input (E, F) on x ⊔ x.
        let ef: Vec<R> = e.iter().chain(f).cloned().collect();
        let d = &data.diagram;
        let mut on_w = vec![R::one(); d.w.len()];
        for (kk, &(_, s)) in d.pb.pairs.iter().enumerate() {
            on_w[s] = on_w[s].mul(&ef[d.eps.apply(kk)]);
        }
        let mut dist = vec![R::zero(); ny];
        for (s, &z) in d.g.map().iter().enumerate() {
            dist[z] = dist[z].add(&on_w[s]);
        }

        for z in 0..ny {
            if dist[z] != lhs[z] {
                report.failure = Some(format!("distributivity formula fails at z = {z} for E = {e:?}, F = {f:?}"));
                return Ok(report);
            }
            if fibers[z].is_empty() {
                report.empty_fiber_checked += 1;
                if lhs[z] != R::one() || pe[z] != R::one() || pf[z] != R::one() || cross[z] != R::zero() {
                    report.failure = Some(format!("empty-fiber reduction fails at z = {z}"));
                    return Ok(report);
                }
            } else {
                report.three_term_checked += 1;
                let rhs = pe[z].add(&cross[z]).add(&pf[z]);
                if rhs != lhs[z] {
                    report.failure = Some(format!(
                        "three-term identity fails at z = {z} for E = {e:?}, F = {f:?}: {:?} vs {rhs:?}",
                        lhs[z]
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}
