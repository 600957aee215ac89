//! Piecewise trigonometric functions on the cut configuration space.
//!
//! Two particles on a star graph with `n` edges live on `n²` quadrants
//! `Q_ij` with local coordinates `(x, y) ∈ [0,∞)²`. Cutting each diagonal
//! quadrant along `x = y` leaves `n² + n` charts ([`Region`]). Every function
//! this crate deals with is, on each chart, a rational combination of the
//! eight products `tx(kx·x)·ty(ky·y)` with `tx, ty ∈ {cos, sin}` and
//! `(kx, ky)` either `(k1, k2)` or `(k2, k1)` ([`TrigMonomial`]). A [`Wave`]
//! stores those coefficients exactly.
//!
//! With `k1, k2 ≠ 0` and `|k1| ≠ |k2|` the eight monomials are linearly
//! independent on any open chart, so two waves are the same function iff
//! their coefficient maps agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Graph size, momenta and coupling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    n: usize,
    k1: Rational,
    k2: Rational,
    c: Rational,
}

impl Params {
    pub fn new(n: usize, k1: Rational, k2: Rational, c: Rational) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::TooFewEdges(n));
        }
        if k1.is_zero() || k2.is_zero() {
            return Err(Error::ZeroMomentum);
        }
        if k1.abs() == k2.abs() {
            return Err(Error::EqualMomenta);
        }
        if c.is_zero() {
            return Err(Error::ZeroCoupling);
        }
        Ok(Arc::new(Params { n, k1, k2, c }))
    }

    /// Parses the three rationals from their `p/q` text form.
    pub fn parse(n: usize, k1: &str, k2: &str, c: &str) -> Result<Arc<Self>> {
        Self::new(
            n,
            rational::parse(k1)?,
            rational::parse(k2)?,
            rational::parse(c)?,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k1(&self) -> &Rational {
        &self.k1
    }

    pub fn k2(&self) -> &Rational {
        &self.k2
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// Same momenta, different graph size.
    pub fn with_n(&self, n: usize) -> Result<Arc<Self>> {
        Self::new(n, self.k1.clone(), self.k2.clone(), self.c.clone())
    }

    /// Same graph and momenta, different coupling.
    pub fn with_c(&self, c: Rational) -> Result<Arc<Self>> {
        Self::new(self.n, self.k1.clone(), self.k2.clone(), c)
    }

    pub fn region_count(&self) -> usize {
        self.n * self.n + self.n
    }

    pub fn coord_len(&self) -> usize {
        8 * self.region_count()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k1={} k2={} c={}", self.n, self.k1, self.k2, self.c)
    }
}

/// One chart of the cut configuration space. Edge indices are 1-based.
///
/// `Lower(i)` is the part of `Q_ii` with `x > y`, `Upper(i)` the part with
/// `x < y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Off(usize, usize),
    Lower(usize),
    Upper(usize),
}

impl Region {
    fn sort_key(&self) -> (u8, usize, usize) {
        match *self {
            Region::Off(i, j) => (0, i, j),
            Region::Lower(i) => (1, i, 0),
            Region::Upper(i) => (1, i, 1),
        }
    }

    /// All regions for graph size `n`, in canonical order: `Off(1,2)`,
    /// `Off(1,3)`, …, `Off(n,n-1)`, then `Lower(1)`, `Upper(1)`, `Lower(2)`, ….
    pub fn all(n: usize) -> Vec<Region> {
        let mut out = Vec::with_capacity(n * n + n);
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    out.push(Region::Off(i, j));
                }
            }
        }
        for i in 1..=n {
            out.push(Region::Lower(i));
            out.push(Region::Upper(i));
        }
        out
    }

    pub fn is_valid(&self, n: usize) -> bool {
        let ok = |i: usize| (1..=n).contains(&i);
        match *self {
            Region::Off(i, j) => i != j && ok(i) && ok(j),
            Region::Lower(i) | Region::Upper(i) => ok(i),
        }
    }

    /// Position in [`Region::all`]. Assumes `self.is_valid(n)`.
    pub fn index(&self, n: usize) -> usize {
        match *self {
            Region::Off(i, j) => (i - 1) * (n - 1) + if j < i { j - 1 } else { j - 2 },
            Region::Lower(i) => n * (n - 1) + 2 * (i - 1),
            Region::Upper(i) => n * (n - 1) + 2 * (i - 1) + 1,
        }
    }

    /// Edge carrying the first particle.
    pub fn x_edge(&self) -> usize {
        match *self {
            Region::Off(i, _) | Region::Lower(i) | Region::Upper(i) => i,
        }
    }

    /// Edge carrying the second particle.
    pub fn y_edge(&self) -> usize {
        match *self {
            Region::Off(_, j) => j,
            Region::Lower(i) | Region::Upper(i) => i,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        !matches!(self, Region::Off(..))
    }
}

impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Off(i, j) => write!(f, "Off({i},{j})"),
            Region::Lower(i) => write!(f, "Lower({i})"),
            Region::Upper(i) => write!(f, "Upper({i})"),
        }
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a region label: {s:?}"));
        let s = s.trim();
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (head, nums.as_slice()) {
            ("Off", [i, j]) => Ok(Region::Off(*i, *j)),
            ("Lower", [i]) => Ok(Region::Lower(*i)),
            ("Upper", [i]) => Ok(Region::Upper(*i)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn bit(self) -> usize {
        self as usize
    }

    fn from_bit(b: usize) -> Self {
        if b == 0 {
            Trig::Cos
        } else {
            Trig::Sin
        }
    }

    pub fn eval(self, arg: f64) -> f64 {
        match self {
            Trig::Cos => arg.cos(),
            Trig::Sin => arg.sin(),
        }
    }

    fn letter(self) -> char {
        match self {
            Trig::Cos => 'C',
            Trig::Sin => 'S',
        }
    }
}

/// Which momentum multiplies which coordinate: `A12` puts `k1` on `x` and
/// `k2` on `y`, `A21` the reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Assign {
    A12,
    A21,
}

impl Assign {
    pub const BOTH: [Assign; 2] = [Assign::A12, Assign::A21];

    pub fn swapped(self) -> Self {
        match self {
            Assign::A12 => Assign::A21,
            Assign::A21 => Assign::A12,
        }
    }

    /// `(kx, ky)` under this assignment.
    pub fn momenta(self, p: &Params) -> (&Rational, &Rational) {
        match self {
            Assign::A12 => (&p.k1, &p.k2),
            Assign::A21 => (&p.k2, &p.k1),
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Assign::A12 => "12",
            Assign::A21 => "21",
        }
    }
}

/// `tx(kx·x)·ty(ky·y)` with `(kx, ky)` fixed by `assign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrigMonomial {
    pub tx: Trig,
    pub ty: Trig,
    pub assign: Assign,
}

impl TrigMonomial {
    pub const fn new(tx: Trig, ty: Trig, assign: Assign) -> Self {
        TrigMonomial { tx, ty, assign }
    }

    /// Canonical order: sorted by `(assign, tx, ty)` with `A12 < A21` and
    /// `Cos < Sin`.
    pub fn all() -> [TrigMonomial; 8] {
        std::array::from_fn(Self::from_index)
    }

    pub fn index(self) -> usize {
        (self.assign as usize) * 4 + self.tx.bit() * 2 + self.ty.bit()
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < 8, "monomial index {i} out of range");
        let assign = if i < 4 { Assign::A12 } else { Assign::A21 };
        TrigMonomial::new(Trig::from_bit((i >> 1) & 1), Trig::from_bit(i & 1), assign)
    }

    pub fn label(self) -> String {
        format!(
            "{}{}{}",
            self.tx.letter(),
            self.ty.letter(),
            self.assign.suffix()
        )
    }
}

impl fmt::Display for TrigMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for TrigMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TrigMonomial::all()
            .into_iter()
            .find(|m| m.label() == s.trim())
            .ok_or_else(|| Error::Parse(format!("not a monomial label: {s:?}")))
    }
}

/// Coefficients of the eight monomials on one region.
pub type Block = [Rational; 8];

pub fn zero_block() -> Block {
    std::array::from_fn(|_| Rational::zero())
}

fn block_is_zero(b: &Block) -> bool {
    b.iter().all(Zero::is_zero)
}

/// A piecewise trigonometric polynomial. Regions with all-zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wave {
    params: Arc<Params>,
    coeffs: BTreeMap<Region, Block>,
}

impl Wave {
    pub fn zero(params: &Arc<Params>) -> Self {
        Wave {
            params: Arc::clone(params),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_blocks(
        params: &Arc<Params>,
        blocks: impl IntoIterator<Item = (Region, Block)>,
    ) -> Result<Self> {
        let mut w = Wave::zero(params);
        for (region, block) in blocks {
            if !region.is_valid(params.n) {
                return Err(Error::InvalidRegion {
                    region: region.to_string(),
                    n: params.n,
                });
            }
            let slot = w.coeffs.entry(region).or_insert_with(zero_block);
            for (s, b) in slot.iter_mut().zip(block) {
                *s += b;
            }
        }
        w.prune();
        Ok(w)
    }

    pub fn params(&self) -> &Arc<Params> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn block(&self, region: Region) -> Option<&Block> {
        self.coeffs.get(&region)
    }

    /// Coefficients on `region`, zero when absent.
    pub fn block_or_zero(&self, region: Region) -> Block {
        self.coeffs.get(&region).cloned().unwrap_or_else(zero_block)
    }

    pub fn coeff(&self, region: Region, mono: TrigMonomial) -> Rational {
        self.coeffs
            .get(&region)
            .map(|b| b[mono.index()].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Populated regions, in canonical order.
    pub fn regions(&self) -> impl Iterator<Item = (&Region, &Block)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn touches_diagonal(&self) -> bool {
        self.coeffs.keys().any(Region::is_diagonal)
    }

    fn same_params(&self, other: &Wave) -> Result<()> {
        if Arc::ptr_eq(&self.params, &other.params) || self.params == other.params {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, b| !block_is_zero(b));
    }

    /// `self += q · other`; callers guarantee equal params.
    pub(crate) fn axpy_in_place(&mut self, q: &Rational, other: &Wave) {
        debug_assert!(self.same_params(other).is_ok());
        if q.is_zero() {
            return;
        }
        for (region, block) in &other.coeffs {
            let slot = self.coeffs.entry(*region).or_insert_with(zero_block);
            for (s, b) in slot.iter_mut().zip(block) {
                *s += q * b;
            }
        }
        self.prune();
    }

    pub fn checked_add(&self, other: &Wave) -> Result<Wave> {
        self.same_params(other)?;
        let mut out = self.clone();
        out.axpy_in_place(&rational::int(1), other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Wave) -> Result<Wave> {
        self.same_params(other)?;
        let mut out = self.clone();
        out.axpy_in_place(&rational::int(-1), other);
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Wave {
        if q.is_zero() {
            return Wave::zero(&self.params);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(r, b)| (*r, std::array::from_fn(|k| &b[k] * q)))
            .collect();
        Wave {
            params: Arc::clone(&self.params),
            coeffs,
        }
    }

    /// `Σ q_k · w_k` over waves sharing `params`.
    pub fn linear_combination<'a>(
        params: &Arc<Params>,
        terms: impl IntoIterator<Item = (&'a Rational, &'a Wave)>,
    ) -> Result<Wave> {
        let mut out = Wave::zero(params);
        for (q, w) in terms {
            out.same_params(w)?;
            out.axpy_in_place(q, w);
        }
        Ok(out)
    }

    pub fn to_coords(&self) -> CoeffVector {
        let n = self.params.n;
        let mut entries = vec![Rational::zero(); self.params.coord_len()];
        for (region, block) in &self.coeffs {
            let base = 8 * region.index(n);
            entries[base..base + 8].clone_from_slice(block);
        }
        CoeffVector { n, entries }
    }

    pub fn from_coords(v: &CoeffVector, params: &Arc<Params>) -> Result<Wave> {
        let expected = params.coord_len();
        if v.n != params.n || v.entries.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: v.entries.len(),
            });
        }
        let blocks = Region::all(params.n)
            .into_iter()
            .zip(v.entries.chunks_exact(8))
            .map(|(r, chunk)| (r, std::array::from_fn(|k| chunk[k].clone())));
        Wave::from_blocks(params, blocks)
    }
}

/// Flat coordinates of a [`Wave`]: block `8·region.index(n) + mono.index()`
/// holds the coefficient of `mono` on `region`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector {
    n: usize,
    entries: Vec<Rational>,
}

impl CoeffVector {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        let expected = 8 * (n * n + n);
        if entries.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: entries.len(),
            });
        }
        Ok(CoeffVector { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Tab-separated `region  monomial  coefficient` rows, nonzero entries
    /// only, in canonical order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (r, region) in Region::all(self.n).into_iter().enumerate() {
            for mono in TrigMonomial::all() {
                let q = &self.entries[8 * r + mono.index()];
                if !q.is_zero() {
                    out.push_str(&format!("{region}\t{mono}\t{}\n", rational::format(q)));
                }
            }
        }
        out
    }

    /// Inverse of [`CoeffVector::to_tsv`]. Blank lines and `#` comments are
    /// skipped; entries that never appear are zero; repeated entries add up.
    pub fn from_tsv(n: usize, text: &str) -> Result<Self> {
        let mut entries = vec![Rational::zero(); 8 * (n * n + n)];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [region, mono, q] = fields.as_slice() else {
                return Err(Error::Parse(format!(
                    "line {}: expected 3 tab-separated fields",
                    lineno + 1
                )));
            };
            let region: Region = region.parse()?;
            if !region.is_valid(n) {
                return Err(Error::InvalidRegion {
                    region: region.to_string(),
                    n,
                });
            }
            let mono: TrigMonomial = mono.parse()?;
            entries[8 * region.index(n) + mono.index()] += rational::parse(q)?;
        }
        Ok(CoeffVector { n, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn params(n: usize) -> Arc<Params> {
        Params::new(n, ratio(3, 2), ratio(5, 7), int(2)).unwrap()
    }

    fn sample_wave(p: &Arc<Params>) -> Wave {
        let mut b = zero_block();
        b[0] = ratio(1, 3);
        b[7] = int(-2);
        let mut d = zero_block();
        d[3] = ratio(5, 2);
        Wave::from_blocks(p, [(Region::Off(1, 2), b), (Region::Upper(2), d)]).unwrap()
    }

    #[test]
    fn params_invariants() {
        assert!(matches!(
            Params::new(1, int(1), int(2), int(1)),
            Err(Error::TooFewEdges(1))
        ));
        assert!(matches!(
            Params::new(3, int(0), int(2), int(1)),
            Err(Error::ZeroMomentum)
        ));
        assert!(matches!(
            Params::new(3, int(2), int(-2), int(1)),
            Err(Error::EqualMomenta)
        ));
        assert!(matches!(
            Params::new(3, int(1), int(2), int(0)),
            Err(Error::ZeroCoupling)
        ));
    }

    #[test]
    fn region_enumeration_is_canonical() {
        for n in 2..=8 {
            let all = Region::all(n);
            assert_eq!(all.len(), n * n + n);
            for (k, r) in all.iter().enumerate() {
                assert_eq!(r.index(n), k);
                assert!(r.is_valid(n));
                assert_eq!(r.to_string().parse::<Region>().unwrap(), *r);
            }
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(sorted, all);
        }
        assert_eq!(
            Region::all(2),
            vec![
                Region::Off(1, 2),
                Region::Off(2, 1),
                Region::Lower(1),
                Region::Upper(1),
                Region::Lower(2),
                Region::Upper(2)
            ]
        );
    }

    #[test]
    fn monomial_order() {
        let labels: Vec<String> = TrigMonomial::all().iter().map(|m| m.label()).collect();
        assert_eq!(
            labels,
            ["CC12", "CS12", "SC12", "SS12", "CC21", "CS21", "SC21", "SS21"]
        );
        for m in TrigMonomial::all() {
            assert_eq!(TrigMonomial::from_index(m.index()), m);
            assert_eq!(m.label().parse::<TrigMonomial>().unwrap(), m);
        }
    }

    #[test]
    fn add_identity_and_inverse() {
        let p = params(3);
        let w = sample_wave(&p);
        assert_eq!(w.checked_add(&Wave::zero(&p)).unwrap(), w);
        let neg = w.scale(&int(-1));
        assert!(w.checked_add(&neg).unwrap().is_zero());
    }

    #[test]
    fn scale_by_one_and_zero() {
        let p = params(3);
        let w = sample_wave(&p);
        assert_eq!(w.scale(&int(1)), w);
        assert!(w.scale(&int(0)).is_zero());
    }

    #[test]
    fn mismatched_params_rejected() {
        let a = sample_wave(&params(3));
        let b = sample_wave(&Params::new(3, ratio(3, 2), ratio(5, 7), int(3)).unwrap());
        assert!(matches!(a.checked_add(&b), Err(Error::ParamsMismatch)));
        assert!(matches!(
            sample_wave(&params(4)).checked_sub(&a),
            Err(Error::ParamsMismatch)
        ));
    }

    #[test]
    fn invalid_region_rejected() {
        let p = params(2);
        let err = Wave::from_blocks(&p, [(Region::Off(1, 3), zero_block())]);
        assert!(matches!(err, Err(Error::InvalidRegion { .. })));
    }

    #[test]
    fn coords_round_trip_and_zero() {
        let p = params(3);
        assert!(Wave::zero(&p).to_coords().is_zero());
        let w = sample_wave(&p);
        let v = w.to_coords();
        assert_eq!(v.entries().len(), 8 * 12);
        assert_eq!(Wave::from_coords(&v, &p).unwrap(), w);
        let short = CoeffVector::new(3, vec![int(0); 95]);
        assert!(short.is_err());
        let wrong_n = Wave::from_coords(&params(2).as_ref().clone().into_zero_coords(), &p);
        assert!(wrong_n.is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let p = params(3);
        let v = sample_wave(&p).to_coords();
        let text = v.to_tsv();
        assert_eq!(
            text,
            "Off(1,2)\tCC12\t1/3\nOff(1,2)\tSS21\t-2\nUpper(2)\tSS12\t5/2\n"
        );
        assert_eq!(CoeffVector::from_tsv(3, &text).unwrap(), v);
        assert!(CoeffVector::from_tsv(3, "Off(1,2)\tCC12").is_err());
        assert!(CoeffVector::from_tsv(2, "Off(1,3)\tCC12\t1").is_err());
    }

    impl Params {
        fn into_zero_coords(self) -> CoeffVector {
            CoeffVector::new(self.n, vec![Rational::zero(); self.coord_len()]).unwrap()
        }
    }
}
