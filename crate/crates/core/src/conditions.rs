//! Matching conditions as exact linear functionals on waves.
//!
//! Restricting a wave to a boundary turns its trig monomials into products
//! of one-variable trig functions; under the [`Params`] invariants those are
//! linearly independent, so a condition holds as a function identity iff the
//! resulting coefficient vector vanishes.
//!
//! On the diagonal `x = y = t` of `Q_ii` the basis is
//! `{CC, CS, SC, SS}` = `{cos k1t·cos k2t, cos k1t·sin k2t, sin k1t·cos k2t,
//! sin k1t·sin k2t}`. On the vertex boundaries `x = 0` or `y = 0` it is
//! `{cos k1s, sin k1s, cos k2s, sin k2s}` in the free coordinate `s`.
//!
//! The derivative jump across the diagonal is taken as the `Upper` (`x < y`)
//! side minus the `Lower` (`x > y`) side of `½(∂x - ∂y)`.

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{self, Rational};
use crate::wave::{zero_block, Assign, Block, Params, Region, Trig, TrigMonomial, Wave};

pub type Trace4 = [Rational; 4];

fn zero4() -> Trace4 {
    std::array::from_fn(|_| Rational::zero())
}

fn sub4(a: &Trace4, b: &Trace4) -> Trace4 {
    std::array::from_fn(|k| &a[k] - &b[k])
}

pub const DIAG_BASIS: [&str; 4] = ["CC", "CS", "SC", "SS"];
pub const VERTEX_BASIS: [&str; 4] = ["cos(k1 s)", "sin(k1 s)", "cos(k2 s)", "sin(k2 s)"];

/// Coefficients over `{CC, CS, SC, SS}` on the diagonal of edge `edge`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagTrace {
    pub edge: usize,
    pub coeffs: Trace4,
}

impl DiagTrace {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational::format).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn region(self, edge: usize) -> Region {
        match self {
            Side::Lower => Region::Lower(edge),
            Side::Upper => Region::Upper(edge),
        }
    }
}

fn check_edge(params: &Params, edge: usize) -> Result<()> {
    if (1..=params.n()).contains(&edge) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            what: "edge",
            index: edge,
            lo: 1,
            hi: params.n(),
        })
    }
}

/// Index into `{CC, CS, SC, SS}` of a monomial restricted to `x = y = t`.
/// The first letter always refers to the `k1` factor.
fn diag_slot(m: TrigMonomial) -> usize {
    let (t1, t2) = match m.assign {
        Assign::A12 => (m.tx, m.ty),
        Assign::A21 => (m.ty, m.tx),
    };
    (t1 as usize) * 2 + t2 as usize
}

fn restrict_to_diagonal(block: &Block) -> Trace4 {
    let mut out = zero4();
    for m in TrigMonomial::all() {
        let q = &block[m.index()];
        if !q.is_zero() {
            out[diag_slot(m)] += q;
        }
    }
    out
}

fn derivative(t: Trig, k: &Rational) -> (Trig, Rational) {
    match t {
        Trig::Cos => (Trig::Sin, -k.clone()),
        Trig::Sin => (Trig::Cos, k.clone()),
    }
}

/// `∂x` of a block, as a block.
pub fn d_dx(params: &Params, block: &Block) -> Block {
    let mut out = zero_block();
    for m in TrigMonomial::all() {
        let q = &block[m.index()];
        if q.is_zero() {
            continue;
        }
        let (kx, _) = m.assign.momenta(params);
        let (tx, f) = derivative(m.tx, kx);
        out[TrigMonomial::new(tx, m.ty, m.assign).index()] += q * f;
    }
    out
}

/// `∂y` of a block, as a block.
pub fn d_dy(params: &Params, block: &Block) -> Block {
    let mut out = zero_block();
    for m in TrigMonomial::all() {
        let q = &block[m.index()];
        if q.is_zero() {
            continue;
        }
        let (_, ky) = m.assign.momenta(params);
        let (ty, f) = derivative(m.ty, ky);
        out[TrigMonomial::new(m.tx, ty, m.assign).index()] += q * f;
    }
    out
}

fn half_difference_derivative(params: &Params, block: &Block) -> Block {
    let dx = d_dx(params, block);
    let dy = d_dy(params, block);
    let half = rational::ratio(1, 2);
    std::array::from_fn(|k| (&dx[k] - &dy[k]) * &half)
}

/// Value of `w` on the diagonal of `edge`, seen from `side`.
pub fn diag_value(w: &Wave, edge: usize, side: Side) -> Result<DiagTrace> {
    check_edge(w.params(), edge)?;
    let coeffs = w
        .block(side.region(edge))
        .map(restrict_to_diagonal)
        .unwrap_or_else(zero4);
    Ok(DiagTrace { edge, coeffs })
}

fn side_flux(w: &Wave, edge: usize, side: Side) -> Trace4 {
    w.block(side.region(edge))
        .map(|b| restrict_to_diagonal(&half_difference_derivative(w.params(), b)))
        .unwrap_or_else(zero4)
}

/// Jump of `½(∂x - ∂y)` across the diagonal of `edge`: upper side minus
/// lower side.
pub fn diag_jump(w: &Wave, edge: usize) -> Result<DiagTrace> {
    check_edge(w.params(), edge)?;
    let coeffs = sub4(
        &side_flux(w, edge, Side::Upper),
        &side_flux(w, edge, Side::Lower),
    );
    Ok(DiagTrace { edge, coeffs })
}

/// `Upper - Lower` diagonal value on `edge`.
pub fn diag_continuity(w: &Wave, edge: usize) -> Result<DiagTrace> {
    let up = diag_value(w, edge, Side::Upper)?;
    let lo = diag_value(w, edge, Side::Lower)?;
    Ok(DiagTrace {
        edge,
        coeffs: sub4(&up.coeffs, &lo.coeffs),
    })
}

pub fn is_diag_continuous(w: &Wave) -> bool {
    (1..=w.params().n()).all(|e| diag_continuity(w, e).expect("edge in range").is_zero())
}

/// `(1/c)·jump - value` on every edge. Defined only for waves that are
/// continuous across the diagonal; otherwise the per-edge continuity
/// residuals come back in the error.
pub fn defect(w: &Wave) -> Result<Vec<DiagTrace>> {
    let n = w.params().n();
    let continuity: Vec<DiagTrace> = (1..=n)
        .map(|e| diag_continuity(w, e))
        .collect::<Result<_>>()?;
    if continuity.iter().any(|t| !t.is_zero()) {
        return Err(Error::Discontinuous(continuity));
    }
    let inv_c = w.params().c().recip();
    (1..=n)
        .map(|e| {
            let jump = diag_jump(w, e)?;
            let value = diag_value(w, e, Side::Upper)?;
            Ok(DiagTrace {
                edge: e,
                coeffs: std::array::from_fn(|k| &jump.coeffs[k] * &inv_c - &value.coeffs[k]),
            })
        })
        .collect()
}

/// Residuals of the diagonal conditions on one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbcResidual {
    pub continuity: DiagTrace,
    /// `jump - c·value`, with the value read from the upper side.
    pub dbc: DiagTrace,
}

impl DbcResidual {
    pub fn is_zero(&self) -> bool {
        self.continuity.is_zero() && self.dbc.is_zero()
    }
}

pub fn dbc_residual(w: &Wave) -> Vec<DbcResidual> {
    let c = w.params().c();
    (1..=w.params().n())
        .map(|e| {
            let jump = diag_jump(w, e).expect("edge in range");
            let value = diag_value(w, e, Side::Upper).expect("edge in range");
            DbcResidual {
                continuity: diag_continuity(w, e).expect("edge in range"),
                dbc: DiagTrace {
                    edge: e,
                    coeffs: std::array::from_fn(|k| &jump.coeffs[k] - c * &value.coeffs[k]),
                },
            }
        })
        .collect()
}

pub fn satisfies_dbc(w: &Wave) -> bool {
    dbc_residual(w).iter().all(DbcResidual::is_zero)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BoundarySide {
    /// `x = 0`, i.e. the first particle at the vertex.
    X,
    /// `y = 0`.
    Y,
}

/// A trace on `x = 0` (or `y = 0`) over
/// `{cos k1s, sin k1s, cos k2s, sin k2s}` in the free coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTrace {
    pub side: BoundarySide,
    /// Edge of the particle sitting at the vertex.
    pub fixed_edge: usize,
    /// Edge of the other particle.
    pub free_edge: usize,
    pub coeffs: Trace4,
}

fn momentum_slot(params: &Params, k: &Rational) -> usize {
    if k == params.k1() {
        0
    } else {
        debug_assert_eq!(k, params.k2());
        1
    }
}

/// Region containing the vertex boundary of `Q_{fixed,free}` (for `X`) or
/// `Q_{free,fixed}` (for `Y`). On a diagonal quadrant the boundary `x = 0`
/// borders the `x < y` triangle, `y = 0` the `x > y` one.
fn boundary_region(side: BoundarySide, fixed: usize, free: usize) -> Region {
    match side {
        BoundarySide::X if fixed == free => Region::Upper(fixed),
        BoundarySide::X => Region::Off(fixed, free),
        BoundarySide::Y if fixed == free => Region::Lower(fixed),
        BoundarySide::Y => Region::Off(free, fixed),
    }
}

fn vertex_trace(
    w: &Wave,
    side: BoundarySide,
    fixed: usize,
    free: usize,
    derivative: bool,
) -> VertexTrace {
    let params = w.params();
    let mut coeffs = zero4();
    if let Some(block) = w.block(boundary_region(side, fixed, free)) {
        for m in TrigMonomial::all() {
            let q = &block[m.index()];
            if q.is_zero() {
                continue;
            }
            let (kx, ky) = m.assign.momenta(params);
            // At 0, cos ↦ 1 and sin ↦ 0; the derivative picks out sin with factor k.
            let (vanishing, surviving, k_fixed, k_free) = match side {
                BoundarySide::X => (m.tx, m.ty, kx, ky),
                BoundarySide::Y => (m.ty, m.tx, ky, kx),
            };
            let factor = match (derivative, vanishing) {
                (false, Trig::Cos) => q.clone(),
                (true, Trig::Sin) => q * k_fixed,
                _ => continue,
            };
            coeffs[momentum_slot(params, k_free) * 2 + surviving as usize] += factor;
        }
    }
    VertexTrace {
        side,
        fixed_edge: fixed,
        free_edge: free,
        coeffs,
    }
}

/// Value of `w` with the `side` particle at the vertex, coming in along
/// `fixed`, the other particle on `free`.
pub fn vertex_value(w: &Wave, side: BoundarySide, fixed: usize, free: usize) -> VertexTrace {
    vertex_trace(w, side, fixed, free, false)
}

/// Outgoing derivative along `fixed` at the vertex.
pub fn vertex_derivative(w: &Wave, side: BoundarySide, fixed: usize, free: usize) -> VertexTrace {
    vertex_trace(w, side, fixed, free, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    VertexContinuityX,
    VertexContinuityY,
    KirchhoffX,
    KirchhoffY,
    DiagContinuity,
    Dbc,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::VertexContinuityX => "vertex-continuity-x",
            Condition::VertexContinuityY => "vertex-continuity-y",
            Condition::KirchhoffX => "kirchhoff-x",
            Condition::KirchhoffY => "kirchhoff-y",
            Condition::DiagContinuity => "diag-continuity",
            Condition::Dbc => "dbc",
        }
    }
}

/// One residual vector. `index` is the column (for `x = 0` conditions), the
/// row (for `y = 0`), or the edge (diagonal conditions); `other` is the edge
/// compared against edge 1 in vertex continuity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub condition: Condition,
    pub index: usize,
    pub other: Option<usize>,
    pub coeffs: Trace4,
}

impl Residual {
    pub fn pass(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Continuity and Kirchhoff residuals at the vertex, for every column and row.
pub fn vertex_residuals(w: &Wave) -> Vec<Residual> {
    let n = w.params().n();
    let mut out = Vec::new();
    for (side, cont, kirch) in [
        (
            BoundarySide::X,
            Condition::VertexContinuityX,
            Condition::KirchhoffX,
        ),
        (
            BoundarySide::Y,
            Condition::VertexContinuityY,
            Condition::KirchhoffY,
        ),
    ] {
        for free in 1..=n {
            let reference = vertex_value(w, side, 1, free);
            for fixed in 2..=n {
                let v = vertex_value(w, side, fixed, free);
                out.push(Residual {
                    condition: cont,
                    index: free,
                    other: Some(fixed),
                    coeffs: sub4(&v.coeffs, &reference.coeffs),
                });
            }
            let mut sum = zero4();
            for fixed in 1..=n {
                let d = vertex_derivative(w, side, fixed, free);
                for (s, q) in sum.iter_mut().zip(d.coeffs) {
                    *s += q;
                }
            }
            out.push(Residual {
                condition: kirch,
                index: free,
                other: None,
                coeffs: sum,
            });
        }
    }
    out
}

pub fn satisfies_vertex_conditions(w: &Wave) -> bool {
    vertex_residuals(w).iter().all(Residual::pass)
}

/// Every condition: vertex residuals followed by per-edge diagonal
/// continuity and jump residuals.
pub fn all_residuals(w: &Wave) -> Vec<Residual> {
    let mut out = vertex_residuals(w);
    for r in dbc_residual(w) {
        out.push(Residual {
            condition: Condition::DiagContinuity,
            index: r.continuity.edge,
            other: None,
            coeffs: r.continuity.coeffs,
        });
        out.push(Residual {
            condition: Condition::Dbc,
            index: r.dbc.edge,
            other: None,
            coeffs: r.dbc.coeffs,
        });
    }
    out
}

/// True iff `w` satisfies every vertex and diagonal condition exactly.
pub fn is_eigensolution(w: &Wave) -> bool {
    all_residuals(w).iter().all(Residual::pass)
}

/// The `8n` diagonal functionals applied to a wave: for each edge, four
/// continuity rows then four jump rows.
pub fn diagonal_functionals(w: &Wave) -> Vec<Rational> {
    dbc_residual(w)
        .into_iter()
        .flat_map(|r| r.continuity.coeffs.into_iter().chain(r.dbc.coeffs))
        .collect()
}

/// Continuity rows only (`4n` entries).
pub fn continuity_functionals(w: &Wave) -> Vec<Rational> {
    (1..=w.params().n())
        .flat_map(|e| diag_continuity(w, e).expect("edge in range").coeffs)
        .collect()
}

/// Defect rows of a continuous wave (`4n` entries).
pub fn defect_functionals(w: &Wave) -> Result<Vec<Rational>> {
    Ok(defect(w)?.into_iter().flat_map(|t| t.coeffs).collect())
}

/// Matrix whose column `g` is `functional(generators[g])`.
pub fn functional_matrix(
    rows: usize,
    generators: &[&Wave],
    functional: impl Fn(&Wave) -> Result<Vec<Rational>>,
) -> Result<RatMatrix> {
    let mut m = RatMatrix::zeros(rows, generators.len());
    for (g, w) in generators.iter().enumerate() {
        let col = functional(w)?;
        if col.len() != rows {
            return Err(Error::LengthMismatch {
                expected: rows,
                got: col.len(),
            });
        }
        for (r, q) in col.into_iter().enumerate() {
            m[(r, g)] = q;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_phi, build_psi, lift, phi, Particle};
    use crate::rational::{int, ratio};
    use crate::wave::Params;
    use std::sync::Arc;

    fn params(n: usize) -> Arc<Params> {
        Params::new(n, ratio(3, 2), ratio(5, 7), int(2)).unwrap()
    }

    fn mixed_12(p: &Arc<Params>) -> Wave {
        let n = p.n();
        build_phi(p, n, 0, Assign::A12)
            .unwrap()
            .checked_add(&build_phi(p, 0, n, Assign::A21).unwrap())
            .unwrap()
    }

    fn psi_anti(p: &Arc<Params>, i: usize) -> Wave {
        build_psi(p, i, Assign::A12)
            .unwrap()
            .checked_sub(&build_psi(p, i, Assign::A21).unwrap())
            .unwrap()
    }

    fn tr(edge: usize, v: [Rational; 4]) -> DiagTrace {
        DiagTrace { edge, coeffs: v }
    }

    #[test]
    fn mixed_vector_is_continuous() {
        for n in 2..=6 {
            let p = params(n);
            let w = mixed_12(&p);
            let want = [int(0), int(0), int(2 - n as i64), int(0)];
            for e in 1..=n {
                assert_eq!(diag_value(&w, e, Side::Lower).unwrap(), tr(e, want.clone()));
                assert_eq!(diag_value(&w, e, Side::Upper).unwrap(), tr(e, want.clone()));
            }
        }
    }

    #[test]
    fn antisymmetrized_psi_vanishes_on_diagonal() {
        let p = params(4);
        for i in 1..4 {
            let w = psi_anti(&p, i);
            for e in 1..=4 {
                assert!(diag_value(&w, e, Side::Lower).unwrap().is_zero());
                assert!(diag_value(&w, e, Side::Upper).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn cc_restricts_to_cc() {
        let p = params(3);
        let w = build_phi(&p, 0, 0, Assign::A12).unwrap();
        for e in 1..=3 {
            for side in [Side::Lower, Side::Upper] {
                assert_eq!(
                    diag_value(&w, e, side).unwrap().coeffs,
                    [int(1), int(0), int(0), int(0)]
                );
            }
        }
        let w = build_phi(&p, 0, 1, Assign::A21).unwrap();
        // cos(k2 x) sin(k1 y) on the diagonal is sin(k1 t) cos(k2 t).
        assert_eq!(
            diag_value(&w, 1, Side::Upper).unwrap().coeffs,
            [int(0), int(0), int(1), int(0)]
        );
    }

    #[test]
    fn jump_of_mixed_vector() {
        let p = params(3);
        let (k1, k2) = (p.k1().clone(), p.k2().clone());
        let w = mixed_12(&p);
        let n = int(3);
        for e in 1..=3 {
            assert_eq!(
                diag_jump(&w, e).unwrap().coeffs,
                [-&n * &k1, int(0), int(0), -&n * &k2]
            );
        }
    }

    #[test]
    fn jump_of_antisymmetrized_psi() {
        let p = params(3);
        let (k1, k2) = (p.k1().clone(), p.k2().clone());
        let w = psi_anti(&p, 1);
        let two_n = int(6);
        assert_eq!(
            diag_jump(&w, 1).unwrap().coeffs,
            [int(0), &two_n * &k1, -&two_n * &k2, int(0)]
        );
        assert_eq!(
            diag_jump(&w, 2).unwrap().coeffs,
            [int(0), -&two_n * &k1, &two_n * &k2, int(0)]
        );
        assert!(diag_jump(&w, 3).unwrap().is_zero());
    }

    #[test]
    fn smooth_waves_have_zero_jump() {
        let p = params(4);
        for i in 0..4 {
            for j in 0..4 {
                for a in Assign::BOTH {
                    let w = build_phi(&p, i, j, a).unwrap();
                    for e in 1..=4 {
                        assert!(diag_jump(&w, e).unwrap().is_zero());
                        let d = defect(&w).unwrap();
                        let v = diag_value(&w, e, Side::Lower).unwrap();
                        assert_eq!(
                            d[e - 1].coeffs,
                            std::array::from_fn(|k| -v.coeffs[k].clone())
                        );
                    }
                }
            }
        }
        // Built from non-smooth factors but smooth on the diagonal.
        for a in Assign::BOTH {
            let nn = build_phi(&p, 4, 4, a).unwrap();
            let sym = build_phi(&p, 2, 4, a)
                .unwrap()
                .checked_add(&build_phi(&p, 4, 2, a).unwrap())
                .unwrap();
            for e in 1..=4 {
                assert!(diag_jump(&nn, e).unwrap().is_zero());
                assert!(diag_jump(&sym, e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn defect_of_mixed_vectors() {
        for n in 2..=6 {
            let p = params(n);
            let nn = int(n as i64);
            let (k1, k2, c) = (p.k1(), p.k2(), p.c());
            let d = defect(&mixed_12(&p)).unwrap();
            for t in &d {
                assert_eq!(
                    t.coeffs,
                    [-&nn * k1 / c, int(0), &nn - int(2), -&nn * k2 / c]
                );
            }
            let mixed_21 = build_phi(&p, n, 0, Assign::A21)
                .unwrap()
                .checked_add(&build_phi(&p, 0, n, Assign::A12).unwrap())
                .unwrap();
            for t in defect(&mixed_21).unwrap() {
                assert_eq!(
                    t.coeffs,
                    [-&nn * k2 / c, &nn - int(2), int(0), -&nn * k1 / c]
                );
            }
        }
    }

    #[test]
    fn defect_rejects_discontinuous() {
        let p = params(3);
        let w = build_phi(&p, 0, 3, Assign::A12).unwrap();
        match defect(&w) {
            Err(Error::Discontinuous(res)) => {
                assert_eq!(res.len(), 3);
                // Sides differ by the factor (1-n) vs 1 of φ^n.
                assert!(res
                    .iter()
                    .all(|t| t.coeffs == [int(0), int(3), int(0), int(0)]));
            }
            other => panic!("expected discontinuity, got {other:?}"),
        }
    }

    #[test]
    fn antisymmetric_cc_passes_dbc() {
        let p = params(3);
        let w = build_phi(&p, 0, 0, Assign::A12)
            .unwrap()
            .checked_sub(&build_phi(&p, 0, 0, Assign::A21).unwrap())
            .unwrap();
        assert!(satisfies_dbc(&w));
        assert!(!satisfies_dbc(&build_phi(&p, 0, 0, Assign::A12).unwrap()));
    }

    #[test]
    fn nonsmooth_solution_passes_dbc() {
        let p = params(3);
        let (k1, k2, c) = (p.k1(), p.k2(), p.c());
        let nn = int(3);
        let i = 1;
        let a = &nn * k1 / c;
        let b = -&nn * k2 / c;
        let w = psi_anti(&p, i)
            .checked_add(
                &build_phi(&p, 0, i, Assign::A12)
                    .unwrap()
                    .checked_add(&build_phi(&p, i, 0, Assign::A21).unwrap())
                    .unwrap()
                    .scale(&a),
            )
            .unwrap()
            .checked_add(
                &build_phi(&p, 0, i, Assign::A21)
                    .unwrap()
                    .checked_add(&build_phi(&p, i, 0, Assign::A12).unwrap())
                    .unwrap()
                    .scale(&b),
            )
            .unwrap();
        assert!(satisfies_dbc(&w));
        assert!(defect(&w).unwrap().iter().all(DiagTrace::is_zero));
    }

    #[test]
    fn generators_satisfy_vertex_conditions() {
        for n in 2..=5 {
            let p = params(n);
            for i in 0..=n {
                for j in 0..=n {
                    for a in Assign::BOTH {
                        let w = build_phi(&p, i, j, a).unwrap();
                        assert!(satisfies_vertex_conditions(&w), "n={n} Phi[{i},{j}]");
                    }
                }
            }
        }
    }

    #[test]
    fn lifted_one_particle_states_satisfy_vertex_conditions() {
        for n in 2..=8 {
            let p = params(n);
            for j in 0..=n {
                for particle in [Particle::X, Particle::Y] {
                    let w = lift(&phi(&p, j, particle).unwrap(), Assign::A12).unwrap();
                    assert!(satisfies_vertex_conditions(&w));
                }
            }
        }
    }

    #[test]
    fn phi_n_kirchhoff_terms_cancel() {
        let p = params(4);
        let w = lift(&phi(&p, 4, Particle::X).unwrap(), Assign::A12).unwrap();
        let k1 = p.k1();
        // Column 2: edges 1, 3, 4 contribute k1, edge 2 (diagonal) (1-n)·k1.
        let d_off = vertex_derivative(&w, BoundarySide::X, 1, 2);
        let d_diag = vertex_derivative(&w, BoundarySide::X, 2, 2);
        // φ^0(y) factor is cos(k2 y): slot 2.
        assert_eq!(d_off.coeffs[2], k1.clone());
        assert_eq!(d_diag.coeffs[2], int(-3) * k1);
    }

    #[test]
    fn single_quadrant_sine_violates_kirchhoff() {
        let p = params(3);
        let mut b = zero_block();
        b[TrigMonomial::new(Trig::Sin, Trig::Cos, Assign::A12).index()] = int(1);
        let w = Wave::from_blocks(&p, [(Region::Off(1, 2), b)]).unwrap();
        let res = vertex_residuals(&w);
        let bad: Vec<_> = res.iter().filter(|r| !r.pass()).collect();
        assert!(bad.iter().any(|r| r.condition == Condition::KirchhoffX
            && r.index == 2
            && r.coeffs[2] == *p.k1()));
    }

    #[test]
    fn residuals_are_linear() {
        let p = params(3);
        let a = build_phi(&p, 3, 1, Assign::A12).unwrap();
        let b = build_psi(&p, 2, Assign::A21).unwrap();
        let q = ratio(-7, 3);
        let combo = a.checked_add(&b.scale(&q)).unwrap();
        let fa = diagonal_functionals(&a);
        let fb = diagonal_functionals(&b);
        let fc = diagonal_functionals(&combo);
        for k in 0..fa.len() {
            assert_eq!(fc[k], &fa[k] + &q * &fb[k]);
        }
    }

    #[test]
    fn edge_out_of_range() {
        let p = params(3);
        let w = Wave::zero(&p);
        assert!(diag_value(&w, 0, Side::Lower).is_err());
        assert!(diag_jump(&w, 4).is_err());
    }
}
