//! One-particle states on the cut space and the two-particle product states
//! built from them.
//!
//! A one-particle state is a function of a single coordinate that is `cos`
//! or `sin` of `k` times that coordinate on each edge. When both particles
//! sit on the same edge the cut along the diagonal lets a state take
//! different coefficients depending on whether its own coordinate is the
//! greater or the lesser one; [`Context`] names the three cases.
//!
//! Index conventions: `φ^0` is `cos` on every edge, `φ^j` (`1 ≤ j ≤ n-1`)
//! is `sin` on edge `j` and `-sin` on edge `j+1`, and `φ^n` is `sin`
//! everywhere except on the lesser side of the diagonal, where it is
//! `(1-n)·sin`. The second particle uses the mirrored convention, so
//! `φ^n(y)` carries `1-n` where `y < x`.

use std::sync::Arc;

use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rational::{self, Rational};
use crate::wave::{zero_block, Assign, Params, Region, Trig, TrigMonomial, Wave};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Particle {
    X,
    Y,
}

impl Particle {
    fn name(self) -> &'static str {
        match self {
            Particle::X => "x",
            Particle::Y => "y",
        }
    }
}

/// Where the other particle is, relative to the state's own coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    /// Other particle on a different edge.
    Apart,
    /// Same edge, own coordinate greater.
    OwnGreater,
    /// Same edge, own coordinate less.
    OwnLess,
}

impl Context {
    pub const ALL: [Context; 3] = [Context::Apart, Context::OwnGreater, Context::OwnLess];

    fn slot(self) -> usize {
        self as usize
    }
}

/// `cos`/`sin` coefficients of a one-particle state in one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrigPair {
    pub cos: Rational,
    pub sin: Rational,
}

impl TrigPair {
    pub fn zero() -> Self {
        TrigPair {
            cos: Rational::zero(),
            sin: Rational::zero(),
        }
    }

    fn cos(q: Rational) -> Self {
        TrigPair {
            cos: q,
            sin: Rational::zero(),
        }
    }

    fn sin(q: Rational) -> Self {
        TrigPair {
            cos: Rational::zero(),
            sin: q,
        }
    }

    fn get(&self, t: Trig) -> &Rational {
        match t {
            Trig::Cos => &self.cos,
            Trig::Sin => &self.sin,
        }
    }

    fn axpy(&mut self, q: &Rational, other: &TrigPair) {
        self.cos += q * &other.cos;
        self.sin += q * &other.sin;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneParticleState {
    params: Arc<Params>,
    particle: Particle,
    /// `profile[e - 1][context.slot()]`.
    profile: Vec<[TrigPair; 3]>,
}

impl OneParticleState {
    pub fn zero(params: &Arc<Params>, particle: Particle) -> Self {
        OneParticleState {
            params: Arc::clone(params),
            particle,
            profile: (0..params.n())
                .map(|_| std::array::from_fn(|_| TrigPair::zero()))
                .collect(),
        }
    }

    /// The same pair in every context on each edge.
    fn smooth(params: &Arc<Params>, particle: Particle, per_edge: Vec<TrigPair>) -> Self {
        OneParticleState {
            params: Arc::clone(params),
            particle,
            profile: per_edge
                .into_iter()
                .map(|p| [p.clone(), p.clone(), p])
                .collect(),
        }
    }

    pub fn particle(&self) -> Particle {
        self.particle
    }

    pub fn params(&self) -> &Arc<Params> {
        &self.params
    }

    pub fn pair(&self, edge: usize, ctx: Context) -> &TrigPair {
        &self.profile[edge - 1][ctx.slot()]
    }

    /// True when every edge looks the same in all three contexts.
    pub fn is_smooth(&self) -> bool {
        self.profile.iter().all(|p| p[0] == p[1] && p[1] == p[2])
    }

    fn axpy(&mut self, q: &Rational, other: &OneParticleState) {
        for (mine, theirs) in self.profile.iter_mut().zip(&other.profile) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                a.axpy(q, b);
            }
        }
    }

    fn check_compatible(&self, other: &OneParticleState) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        if self.particle != other.particle {
            return Err(Error::WrongParticle {
                expected: self.particle.name(),
                got: other.particle.name(),
            });
        }
        Ok(())
    }
}

fn check_index(what: &'static str, index: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&index) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            what,
            index,
            lo,
            hi,
        })
    }
}

/// `φ^j` for `j ∈ 0..=n`.
pub fn phi(params: &Arc<Params>, j: usize, particle: Particle) -> Result<OneParticleState> {
    let n = params.n();
    check_index("one-particle state", j, 0, n)?;
    let one = Rational::one;
    if j == 0 {
        return Ok(OneParticleState::smooth(
            params,
            particle,
            vec![TrigPair::cos(one()); n],
        ));
    }
    if j < n {
        let per_edge = (1..=n)
            .map(|e| match e {
                e if e == j => TrigPair::sin(one()),
                e if e == j + 1 => TrigPair::sin(-one()),
                _ => TrigPair::zero(),
            })
            .collect();
        return Ok(OneParticleState::smooth(params, particle, per_edge));
    }
    let lesser = rational::int(1 - n as i64);
    Ok(OneParticleState {
        params: Arc::clone(params),
        particle,
        profile: (0..n)
            .map(|_| {
                [
                    TrigPair::sin(one()),
                    TrigPair::sin(one()),
                    TrigPair::sin(lesser.clone()),
                ]
            })
            .collect(),
    })
}

/// Two-particle product `sx(x)·sy(y)` with momenta fixed by `assign`.
pub fn product(sx: &OneParticleState, sy: &OneParticleState, assign: Assign) -> Result<Wave> {
    if sx.particle != Particle::X {
        return Err(Error::WrongParticle {
            expected: "x",
            got: sx.particle.name(),
        });
    }
    if sy.particle != Particle::Y {
        return Err(Error::WrongParticle {
            expected: "y",
            got: sy.particle.name(),
        });
    }
    if sx.params != sy.params {
        return Err(Error::ParamsMismatch);
    }
    let params = &sx.params;
    let blocks = Region::all(params.n()).into_iter().map(|region| {
        let (fx, fy) = match region {
            Region::Off(i, j) => (sx.pair(i, Context::Apart), sy.pair(j, Context::Apart)),
            Region::Lower(i) => (
                sx.pair(i, Context::OwnGreater),
                sy.pair(i, Context::OwnLess),
            ),
            Region::Upper(i) => (
                sx.pair(i, Context::OwnLess),
                sy.pair(i, Context::OwnGreater),
            ),
        };
        let mut block = zero_block();
        for tx in [Trig::Cos, Trig::Sin] {
            for ty in [Trig::Cos, Trig::Sin] {
                let q = fx.get(tx) * fy.get(ty);
                block[TrigMonomial::new(tx, ty, assign).index()] = q;
            }
        }
        (region, block)
    });
    Wave::from_blocks(params, blocks)
}

/// `Φ^{ij} = φ^i(x)·φ^j(y)` for `i, j ∈ 0..=n`.
pub fn build_phi(params: &Arc<Params>, i: usize, j: usize, assign: Assign) -> Result<Wave> {
    product(
        &phi(params, i, Particle::X)?,
        &phi(params, j, Particle::Y)?,
        assign,
    )
}

/// `Ψ^i = Φ^{in} - Φ^{ni}` for `i ∈ 1..n`.
pub fn build_psi(params: &Arc<Params>, i: usize, assign: Assign) -> Result<Wave> {
    let n = params.n();
    check_index("non-smooth product", i, 1, n - 1)?;
    build_phi(params, i, n, assign)?.checked_sub(&build_phi(params, n, i, assign)?)
}

/// A wave with a human-readable name, e.g. `Phi[0,2]_12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledWave {
    pub label: String,
    pub wave: Wave,
}

impl LabeledWave {
    pub fn new(label: impl Into<String>, wave: Wave) -> Self {
        LabeledWave {
            label: label.into(),
            wave,
        }
    }
}

fn phi_label(i: usize, j: usize, a: Assign) -> String {
    format!("Phi[{i},{j}]_{}", a.suffix())
}

fn psi_label(i: usize, a: Assign) -> String {
    format!("Psi[{i}]_{}", a.suffix())
}

pub(crate) fn labeled_phi(p: &Arc<Params>, i: usize, j: usize, a: Assign) -> LabeledWave {
    LabeledWave::new(
        phi_label(i, j, a),
        build_phi(p, i, j, a).expect("indices in range"),
    )
}

pub(crate) fn labeled_psi(p: &Arc<Params>, i: usize, a: Assign) -> LabeledWave {
    LabeledWave::new(psi_label(i, a), build_psi(p, i, a).expect("index in range"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SubbasisKind {
    SmoothSymmetric,
    SmoothAntisymmetric,
    NonSmoothSymmetric,
    NonSmoothAntisymmetric,
    /// Smooth products at both momentum orders.
    CBas,
    /// Non-smooth products at both momentum orders.
    DBas,
}

impl SubbasisKind {
    pub const ALL: [SubbasisKind; 6] = [
        SubbasisKind::SmoothSymmetric,
        SubbasisKind::SmoothAntisymmetric,
        SubbasisKind::NonSmoothSymmetric,
        SubbasisKind::NonSmoothAntisymmetric,
        SubbasisKind::CBas,
        SubbasisKind::DBas,
    ];

    /// Generator count for graph size `n`.
    pub fn expected_len(self, n: usize) -> usize {
        match self {
            SubbasisKind::SmoothSymmetric => (n - 1) * (n - 1) + 1,
            SubbasisKind::SmoothAntisymmetric => 2 * (n - 1),
            SubbasisKind::NonSmoothSymmetric => n - 1,
            SubbasisKind::NonSmoothAntisymmetric => 2,
            SubbasisKind::CBas => 2 * n * n,
            SubbasisKind::DBas => 2 * (n - 1) + 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SubbasisKind::SmoothSymmetric => "smooth-symmetric",
            SubbasisKind::SmoothAntisymmetric => "smooth-antisymmetric",
            SubbasisKind::NonSmoothSymmetric => "nonsmooth-symmetric",
            SubbasisKind::NonSmoothAntisymmetric => "nonsmooth-antisymmetric",
            SubbasisKind::CBas => "cbas",
            SubbasisKind::DBas => "dbas",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Generators of a subbasis, in index-lexicographic order with `A12`
/// before `A21`. The four symmetry classes use the `(k1, k2)` order only.
pub fn subbasis(params: &Arc<Params>, kind: SubbasisKind) -> Vec<LabeledWave> {
    let n = params.n();
    let a = Assign::A12;
    let mut out = Vec::new();
    match kind {
        SubbasisKind::SmoothSymmetric => {
            out.push(labeled_phi(params, 0, 0, a));
            for i in 1..n {
                for j in 1..n {
                    out.push(labeled_phi(params, i, j, a));
                }
            }
        }
        SubbasisKind::SmoothAntisymmetric => {
            for i in 1..n {
                out.push(labeled_phi(params, 0, i, a));
                out.push(labeled_phi(params, i, 0, a));
            }
        }
        SubbasisKind::NonSmoothSymmetric => {
            for i in 1..n {
                out.push(labeled_psi(params, i, a));
            }
        }
        SubbasisKind::NonSmoothAntisymmetric => {
            out.push(labeled_phi(params, 0, n, a));
            out.push(labeled_phi(params, n, 0, a));
        }
        SubbasisKind::CBas => {
            for i in 0..n {
                for j in 0..n {
                    for a in Assign::BOTH {
                        out.push(labeled_phi(params, i, j, a));
                    }
                }
            }
        }
        SubbasisKind::DBas => {
            for i in 1..n {
                for a in Assign::BOTH {
                    out.push(labeled_psi(params, i, a));
                }
            }
            for a in Assign::BOTH {
                out.push(labeled_phi(params, 0, n, a));
            }
            for a in Assign::BOTH {
                out.push(labeled_phi(params, n, 0, a));
            }
        }
    }
    out
}

/// Every product `Φ^{ij}_a` with `i, j ∈ 0..=n`: `2(n+1)²` generators with
/// `2n` linear dependencies among them.
pub fn redundant_generators(params: &Arc<Params>) -> Vec<LabeledWave> {
    let n = params.n();
    let mut out = Vec::with_capacity(2 * (n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            for a in Assign::BOTH {
                out.push(labeled_phi(params, i, j, a));
            }
        }
    }
    out
}

/// Coefficient coordinates of `waves`, one row each.
pub fn coord_matrix<'a>(params: &Params, waves: impl IntoIterator<Item = &'a Wave>) -> RatMatrix {
    RatMatrix::from_rows(
        params.coord_len(),
        waves.into_iter().map(|w| w.to_coords().into_entries()),
    )
    .expect("coordinate rows have uniform length")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependencyReport {
    /// `Φ^{nn}` at both momentum orders lies in span(CBas).
    pub phi_nn_in_smooth_span: bool,
    /// `Φ^{in} + Φ^{ni}` for every `i` and both orders lies in span(CBas).
    pub symmetric_psi_in_smooth_span: bool,
    pub redundant_generators: usize,
    pub redundant_rank: usize,
    pub expected_rank: usize,
    pub pass: bool,
}

/// Certifies that the smooth-looking products built from `φ^n` are
/// combinations of the smooth subbasis, and that the redundant generator set
/// has rank `2n² + 2n + 2`.
pub fn verify_dependencies(params: &Arc<Params>) -> DependencyReport {
    let n = params.n();
    let cbas = subbasis(params, SubbasisKind::CBas);
    let cmat = coord_matrix(params, cbas.iter().map(|g| &g.wave));
    let in_span = |w: &Wave| {
        linalg::in_rowspace(w.to_coords().entries(), &cmat).expect("coordinate lengths agree")
    };
    let phi_nn = Assign::BOTH
        .iter()
        .all(|&a| in_span(&build_phi(params, n, n, a).expect("in range")));
    let sym_psi = Assign::BOTH.iter().all(|&a| {
        (1..n).all(|i| {
            let w = build_phi(params, i, n, a)
                .and_then(|u| u.checked_add(&build_phi(params, n, i, a)?))
                .expect("in range");
            in_span(&w)
        })
    });
    let redundant = redundant_generators(params);
    let redundant_rank = linalg::rank(&coord_matrix(params, redundant.iter().map(|g| &g.wave)));
    let expected_rank = 2 * n * n + 2 * n + 2;
    DependencyReport {
        phi_nn_in_smooth_span: phi_nn,
        symmetric_psi_in_smooth_span: sym_psi,
        redundant_generators: redundant.len(),
        redundant_rank,
        expected_rank,
        pass: phi_nn && sym_psi && redundant_rank == expected_rank,
    }
}

/// A one-particle state with Gaussian-rational coefficients, stored as its
/// real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexState {
    pub re: OneParticleState,
    pub im: OneParticleState,
}

impl ComplexState {
    pub fn zero(params: &Arc<Params>, particle: Particle) -> Self {
        ComplexState {
            re: OneParticleState::zero(params, particle),
            im: OneParticleState::zero(params, particle),
        }
    }

    /// `self += (a + ib) · other`.
    pub fn add_scaled(&mut self, a: &Rational, b: &Rational, other: &ComplexState) -> Result<()> {
        self.re.check_compatible(&other.re)?;
        self.re.axpy(a, &other.re);
        self.re.axpy(&-b, &other.im);
        self.im.axpy(a, &other.im);
        self.im.axpy(b, &other.re);
        Ok(())
    }
}

/// Scattering state `ψ^l`: on edge `j` it is
/// `δ_lj·e^{ikz} + S_lj·e^{-ikz}` with `S = 2P - I`, `P` the projection
/// onto `(1, …, 1)`.
pub fn scattering_state(
    params: &Arc<Params>,
    l: usize,
    particle: Particle,
) -> Result<ComplexState> {
    let n = params.n();
    check_index("scattering state", l, 1, n)?;
    let s = scattering_matrix(n);
    let one = Rational::one();
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for j in 1..=n {
        let delta = if j == l {
            one.clone()
        } else {
            Rational::zero()
        };
        let slj = &s[l - 1][j - 1];
        re.push(TrigPair::cos(&delta + slj));
        im.push(TrigPair::sin(&delta - slj));
    }
    Ok(ComplexState {
        re: OneParticleState::smooth(params, particle, re),
        im: OneParticleState::smooth(params, particle, im),
    })
}

/// `S = 2P - I` for the star graph with `n` edges.
pub fn scattering_matrix(n: usize) -> Vec<Vec<Rational>> {
    let off = rational::ratio(2, n as i64);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        &off - Rational::one()
                    } else {
                        off.clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// `φ^j` for `j < n` rebuilt from scattering states: `φ^0 = ½Σψ^l`,
/// `φ^j = (ψ^j - ψ^{j+1}) / 2i`.
pub fn phi_from_scattering(
    params: &Arc<Params>,
    j: usize,
    particle: Particle,
) -> Result<ComplexState> {
    let n = params.n();
    check_index("smooth one-particle state", j, 0, n - 1)?;
    let mut out = ComplexState::zero(params, particle);
    let half = rational::ratio(1, 2);
    let zero = Rational::zero();
    if j == 0 {
        for l in 1..=n {
            out.add_scaled(&half, &zero, &scattering_state(params, l, particle)?)?;
        }
    } else {
        // 1/(2i) = -i/2
        out.add_scaled(&zero, &-&half, &scattering_state(params, j, particle)?)?;
        out.add_scaled(&zero, &half, &scattering_state(params, j + 1, particle)?)?;
    }
    Ok(out)
}

/// Lifts a one-particle state to a two-particle wave by multiplying with
/// `φ^0` in the other particle.
pub fn lift(state: &OneParticleState, assign: Assign) -> Result<Wave> {
    let partner = |p| phi(&state.params, 0, p);
    match state.particle {
        Particle::X => product(state, &partner(Particle::Y)?, assign),
        Particle::Y => product(&partner(Particle::X)?, state, assign),
    }
}
