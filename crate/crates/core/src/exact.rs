//! Exact rational scalars and dense symmetric matrices.
//!
//! Every quantity in the crate is a [`Rational`]. Matrices store only their
//! upper triangle, so symmetry holds by construction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CpsdError, Result};

/// Arbitrary precision fraction, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `p/q` from machine integers. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(CpsdError::DivisionByZero);
    }
    Ok(a / b)
}

/// Parses the canonical `p/q` text form (also accepts plain integers and
/// finite decimals such as `0.25`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || CpsdError::InvalidArgument(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(CpsdError::DivisionByZero);
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod rational_serde {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalRepr {
        Int(i64),
        Text(String),
    }

    impl RationalRepr {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                RationalRepr::Int(v) => Ok(int(v)),
                RationalRepr::Text(s) => parse_rational(&s),
            }
        }
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RationalRepr::deserialize(d)?
            .into_rational()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec_serde {
    use super::rational_serde::RationalRepr;
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<RationalRepr>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Vec<Rational>>`.
pub mod rational_opt_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Rational>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(format_rational)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::rational_vec_serde")] Vec<Rational>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod rational_opt_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_str(&format_rational(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super::rational_serde")] Rational);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// Block structure of an index space: flat index `b * block_size + i` stands
/// for the pair (block `b`, position `i`).
///
/// Game matrices use blocks = vertices and positions = colors. Correlation
/// matrices use `2n` blocks, the first `n` for Alice's inputs and the last `n`
/// for Bob's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockIndex {
    pub blocks: usize,
    pub block_size: usize,
}

impl BlockIndex {
    pub fn new(blocks: usize, block_size: usize) -> Self {
        Self { blocks, block_size }
    }

    pub fn dim(&self) -> usize {
        self.blocks * self.block_size
    }

    #[inline]
    pub fn flat(&self, block: usize, pos: usize) -> usize {
        debug_assert!(block < self.blocks && pos < self.block_size);
        block * self.block_size + pos
    }

    #[inline]
    pub fn split(&self, flat: usize) -> (usize, usize) {
        (flat / self.block_size, flat % self.block_size)
    }

    /// `Σ_{i,j} A[(a,i),(b,j)]` over one block of `a`.
    pub fn block_sum(&self, a: &SymMatrix, p: usize, q: usize) -> Rational {
        let t = self.block_size;
        let mut s = Rational::zero();
        for i in 0..t {
            for j in 0..t {
                let v = a.get(self.flat(p, i), self.flat(q, j));
                if !v.is_zero() {
                    s += v;
                }
            }
        }
        s
    }
}

/// Dense symmetric matrix of rationals with upper-triangle storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    dim: usize,
    upper: Vec<Rational>,
    index: Option<BlockIndex>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![Rational::zero(); dim * (dim + 1) / 2],
            index: None,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        Self {
            dim,
            upper: vec![Rational::one(); dim * (dim + 1) / 2],
            index: None,
        }
    }

    pub fn diag(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on `i <= j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(f(i, j));
            }
        }
        Self {
            dim,
            upper,
            index: None,
        }
    }

    /// Builds from full rows; fails unless the rows form a symmetric square.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(CpsdError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(CpsdError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j].clone()))
    }

    /// Convenience for fixtures: integer rows.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_upper(dim: usize, upper: Vec<Rational>) -> Result<Self> {
        let expected = dim * (dim + 1) / 2;
        if upper.len() != expected {
            return Err(CpsdError::DimensionMismatch {
                expected,
                found: upper.len(),
            });
        }
        Ok(Self {
            dim,
            upper,
            index: None,
        })
    }

    pub fn with_index(mut self, index: BlockIndex) -> Result<Self> {
        if index.dim() != self.dim {
            return Err(CpsdError::DimensionMismatch {
                expected: self.dim,
                found: index.dim(),
            });
        }
        self.index = Some(index);
        Ok(self)
    }

    pub fn without_index(mut self) -> Self {
        self.index = None;
        self
    }

    pub fn index(&self) -> Option<BlockIndex> {
        self.index
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper triangle, row-major.
    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.dim && j < self.dim);
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // offset of row i in the packed upper triangle
        i * self.dim - i * (i + 1) / 2 + i + (j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.upper[self.pos(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        let p = self.pos(i, j);
        self.upper[p] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Iterates `(i, j, value)` over the upper triangle.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let dim = self.dim;
        (0..dim)
            .flat_map(move |i| (i..dim).map(move |j| (i, j)))
            .zip(self.upper.iter())
            .map(|((i, j), v)| (i, j, v))
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.upper_entries().all(|(i, j, v)| i == j || v.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.upper.iter().all(|v| !v.is_negative())
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self {
            dim: self.dim,
            upper: self.upper.iter().map(|v| v * c).collect(),
            index: self.index,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + b)
                .collect(),
            index: self.index.or(other.index),
        })
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Rational, other: &Self) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.upper.iter_mut().zip(&other.upper) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
        Ok(())
    }

    pub fn max_abs(&self) -> Rational {
        self.upper
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Embeds into a larger dimension by appending zero rows and columns.
    pub fn padded(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        Self::from_fn(dim, |i, j| {
            if j < self.dim {
                self.get(i, j).clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Kronecker product `self ⊗ other`, flat index `i * other.dim + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dim;
        Self::from_fn(self.dim * d, |p, q| {
            let (i, k) = (p / d, p % d);
            let (j, l) = (q / d, q % d);
            self.get(i, j) * other.get(k, l)
        })
    }

    pub fn quad_form(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim {
            return Err(CpsdError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let two = int(2);
        let mut acc = Rational::zero();
        for (i, j, v) in self.upper_entries() {
            if v.is_zero() || x[i].is_zero() || x[j].is_zero() {
                continue;
            }
            if i == j {
                acc += v * &x[i] * &x[j];
            } else {
                acc += &two * v * &x[i] * &x[j];
            }
        }
        Ok(acc)
    }

    /// Outer product `v vᵀ`.
    pub fn outer(v: &[Rational]) -> Self {
        Self::from_fn(v.len(), |i, j| &v[i] * &v[j])
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(CpsdError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct SymMatrixOut<'a> {
    dim: usize,
    #[serde(with = "rational_vec_serde")]
    upper: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<&'a BlockIndex>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymMatrixOut {
            dim: self.dim,
            upper: self.upper.clone(),
            index: self.index.as_ref(),
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SymMatrixIn {
    Upper {
        dim: usize,
        upper: Vec<rational_serde::RationalRepr>,
        #[serde(default)]
        index: Option<BlockIndex>,
    },
    Rows(Vec<Vec<rational_serde::RationalRepr>>),
}

impl SymMatrixIn {
    fn into_matrix(self) -> Result<SymMatrix> {
        match self {
            SymMatrixIn::Upper { dim, upper, index } => {
                let upper = upper
                    .into_iter()
                    .map(|r| r.into_rational())
                    .collect::<Result<Vec<_>>>()?;
                let m = SymMatrix::from_upper(dim, upper)?;
                match index {
                    Some(ix) => m.with_index(ix),
                    None => Ok(m),
                }
            }
            SymMatrixIn::Rows(rows) => {
                let rows = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v.into_rational()).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                SymMatrix::from_rows(&rows)
            }
        }
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SymMatrixIn::deserialize(d)?
            .into_matrix()
            .map_err(serde::de::Error::custom)
    }
}

/// Exact diagonal sum.
pub fn trace(x: &SymMatrix) -> Rational {
    (0..x.dim()).map(|i| x.get(i, i)).sum()
}

/// Trace inner product `⟨X, Y⟩ = Σᵢⱼ XᵢⱼYᵢⱼ`.
pub fn trace_inner(x: &SymMatrix, y: &SymMatrix) -> Result<Rational> {
    if x.dim() != y.dim() {
        return Err(CpsdError::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(trace_inner_unchecked(x, y))
}

pub(crate) fn trace_inner_unchecked(x: &SymMatrix, y: &SymMatrix) -> Rational {
    let mut diag = Rational::zero();
    let mut off = Rational::zero();
    for ((i, j, a), b) in x.upper_entries().zip(y.upper()) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        if i == j {
            diag += a * b;
        } else {
            off += a * b;
        }
    }
    diag + off * int(2)
}

/// Outcome of the exact PSD test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdCheck {
    Psd,
    /// `witness` is a nonzero vector with `witnessᵀ M witness < 0`. Its support
    /// is the failing principal minor.
    Indefinite {
        witness: Vec<Rational>,
    },
}

impl PsdCheck {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdCheck::Psd)
    }
}

/// Exact PSD decision by diagonally pivoted symmetric elimination (LDLᵀ).
///
/// Each elimination step is a congruence, so the remaining Schur complement
/// entries equal `zᵢᵀ M zⱼ` for tracked vectors `zᵢ`. A negative pivot or a
/// zero pivot with a nonzero row then yields an explicit witness.
pub fn psd_check(m: &SymMatrix) -> PsdCheck {
    let n = m.dim();
    let mut s: Vec<Vec<Rational>> = m.rows();
    // z[i] is the combination of unit vectors represented by remaining index i
    let mut z: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        })
        .collect();
    let mut remaining: Vec<usize> = (0..n).collect();

    while !remaining.is_empty() {
        if let Some(&neg) = remaining.iter().find(|&&i| s[i][i].is_negative()) {
            return PsdCheck::Indefinite {
                witness: z[neg].clone(),
            };
        }
        let pivot = remaining.iter().copied().find(|&i| s[i][i].is_positive());
        let Some(p) = pivot else {
            // every remaining diagonal entry is zero: the block must vanish
            for (a, &i) in remaining.iter().enumerate() {
                for &j in &remaining[a + 1..] {
                    if !s[i][j].is_zero() {
                        // (sign·zᵢ + zⱼ)ᵀ M (sign·zᵢ + zⱼ) = 2·sign·Sᵢⱼ < 0
                        let sign = if s[i][j].is_positive() { -1 } else { 1 };
                        let w = z[i]
                            .iter()
                            .zip(&z[j])
                            .map(|(a, b)| a * int(sign) + b)
                            .collect();
                        return PsdCheck::Indefinite { witness: w };
                    }
                }
            }
            return PsdCheck::Psd;
        };
        remaining.retain(|&i| i != p);
        let d = s[p][p].clone();
        let zp = z[p].clone();
        for &i in &remaining {
            if s[i][p].is_zero() {
                continue;
            }
            let l = &s[i][p] / &d;
            for &j in &remaining {
                if !s[p][j].is_zero() {
                    let delta = &l * &s[p][j];
                    s[i][j] -= delta;
                }
            }
            for (zi, zpk) in z[i].iter_mut().zip(&zp) {
                if !zpk.is_zero() {
                    *zi -= &l * zpk;
                }
            }
        }
        for &i in &remaining {
            s[i][p] = Rational::zero();
            s[p][i] = Rational::zero();
        }
    }
    PsdCheck::Psd
}

pub fn is_psd_exact(m: &SymMatrix) -> bool {
    psd_check(m).is_psd()
}

/// How "entries with denominator at most r" is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DenominatorRule {
    /// Every entry's reduced denominator is at most `r`.
    #[default]
    PerEntry,
    /// All entries of a matrix share one denominator `d <= r`, i.e. the
    /// matrix lies in `(1/d)ℤ` for some `d <= r`.
    CommonPerMatrix,
}

impl DenominatorRule {
    pub fn admits(&self, m: &SymMatrix, r: usize) -> bool {
        let r_big = BigInt::from(r);
        match self {
            DenominatorRule::PerEntry => m.upper().iter().all(|v| v.denom() <= &r_big),
            DenominatorRule::CommonPerMatrix => {
                let lcm = m
                    .upper()
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                lcm <= r_big
            }
        }
    }
}

impl FromStr for DenominatorRule {
    type Err = CpsdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-entry" => Ok(Self::PerEntry),
            "common" | "common-per-matrix" => Ok(Self::CommonPerMatrix),
            other => Err(CpsdError::InvalidArgument(format!(
                "unknown denominator rule {other:?} (expected per-entry or common)"
            ))),
        }
    }
}

/// An `n`-tuple of `r×r` rational PSD matrices with traces summing to one
/// and bounded denominators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PsdTuple {
    r: usize,
    mats: Vec<SymMatrix>,
}

impl PsdTuple {
    /// Validates every invariant under the given denominator rule.
    pub fn new(r: usize, mats: Vec<SymMatrix>, rule: DenominatorRule) -> Result<Self> {
        let t = Self { r, mats };
        t.validate(rule)?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(r: usize, mats: Vec<SymMatrix>) -> Self {
        Self { r, mats }
    }

    pub fn validate(&self, rule: DenominatorRule) -> Result<()> {
        if self.r == 0 || self.mats.is_empty() {
            return Err(CpsdError::InvalidTuple("n and r must be positive".into()));
        }
        let mut total = Rational::zero();
        for (i, m) in self.mats.iter().enumerate() {
            if m.dim() != self.r {
                return Err(CpsdError::InvalidTuple(format!(
                    "matrix {i} has size {} instead of {}",
                    m.dim(),
                    self.r
                )));
            }
            if !rule.admits(m, self.r) {
                return Err(CpsdError::InvalidTuple(format!(
                    "matrix {i} has a denominator above {}",
                    self.r
                )));
            }
            if let PsdCheck::Indefinite { witness } = psd_check(m) {
                let w: Vec<String> = witness.iter().map(format_rational).collect();
                return Err(CpsdError::InvalidTuple(format!(
                    "matrix {i} is not PSD (witness [{}])",
                    w.join(", ")
                )));
            }
            total += trace(m);
        }
        if !total.is_one() {
            return Err(CpsdError::InvalidTuple(format!(
                "traces sum to {total}, not 1"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mats(&self) -> &[SymMatrix] {
        &self.mats
    }

    /// Pads every component with zero rows/columns up to size `r`.
    pub fn padded(&self, r: usize) -> Self {
        Self {
            r,
            mats: self.mats.iter().map(|m| m.padded(r)).collect(),
        }
    }
}
