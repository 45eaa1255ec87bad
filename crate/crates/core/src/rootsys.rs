//! Finite root systems with a compact/noncompact grading.
//!
//! Roots live in simple-root coordinates ([`LatticeVector`]); weights live in
//! fundamental-weight coordinates ([`Weight`]), so the coroot pairing with a
//! simple coroot is just a coordinate read-off.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Rational64;

/// Default bound on the rank of constructible systems.
pub const DEFAULT_MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    F,
    G,
}

impl CartanType {
    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'A' => Ok(CartanType::A),
            'B' => Ok(CartanType::B),
            'C' => Ok(CartanType::C),
            'D' => Ok(CartanType::D),
            'F' => Ok(CartanType::F),
            'G' => Ok(CartanType::G),
            other => Err(Error::Config(format!("unknown Cartan type letter '{other}'"))),
        }
    }

    /// Parses labels such as `"G2"` or `"b3"`.
    pub fn parse_label(label: &str) -> Result<(Self, usize)> {
        let label = label.trim();
        let mut chars = label.chars();
        let letter = chars.next().ok_or_else(|| Error::Config("empty Cartan type".into()))?;
        let ty = Self::from_letter(letter)?;
        let rank: usize =
            chars.as_str().parse().map_err(|_| Error::Config(format!("bad Cartan type label '{label}'")))?;
        Ok((ty, rank))
    }
}

/// Integer vector over the simple roots (lowest index first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Nonzero with all coefficients nonnegative.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c <= 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Ordering used for every listing: height first, then reverse-lex, so that
    /// simple roots come out in index order.
    pub fn height_lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.height().cmp(&other.height()).then_with(|| other.0.cmp(&self.0))
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A weight in fundamental-weight coordinates: `coords[i] = ⟨λ, α_i∨⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Rational::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, k: Rational) -> Self {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Comma-separated rationals, e.g. `"-1/2,-1"`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<Rational>()
                    .map_err(|_| Error::Config(format!("bad rational coordinate '{part}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// A finite crystallographic root system with a ℤ₂-grading on the simple roots.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    /// Symmetrized inner products `(α_i, α_j)`, short roots having squared length 2.
    gram: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨α_i, α_j∨⟩`.
    cartan: Vec<Vec<i64>>,
    /// Maps fundamental-weight coordinates to simple-root coordinates.
    inv_cartan_t: Vec<Vec<Rational>>,
    positive_roots: Vec<LatticeVector>,
    root_index: HashMap<LatticeVector, usize>,
    noncompact: Vec<bool>,
}

impl RootSystem {
    /// Builds a system; `noncompact_simple` holds 1-based simple-root indices.
    pub fn new(cartan_type: CartanType, rank: usize, noncompact_simple: &[usize]) -> Result<Self> {
        Self::with_max_rank(cartan_type, rank, noncompact_simple, DEFAULT_MAX_RANK)
    }

    /// Builds from a label like `"B3"`.
    pub fn from_label(label: &str, noncompact_simple: &[usize]) -> Result<Self> {
        let (ty, rank) = CartanType::parse_label(label)?;
        Self::new(ty, rank, noncompact_simple)
    }

    pub fn with_max_rank(
        cartan_type: CartanType,
        rank: usize,
        noncompact_simple: &[usize],
        max_rank: usize,
    ) -> Result<Self> {
        if rank > max_rank {
            return Err(Error::Config(format!("rank {rank} exceeds configured maximum {max_rank}")));
        }
        let gram = gram_matrix(cartan_type, rank)?;
        let mut noncompact = vec![false; rank];
        for &i in noncompact_simple {
            if i == 0 || i > rank {
                return Err(Error::Config(format!("noncompact index {i} outside 1..={rank}")));
            }
            noncompact[i - 1] = true;
        }
        let cartan: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();
        let cartan_t: Vec<Vec<Rational>> =
            (0..rank).map(|i| (0..rank).map(|j| Rational::from_integer(cartan[j][i])).collect()).collect();
        let inv_cartan_t = invert(&cartan_t).ok_or_else(|| Error::Config("singular Cartan matrix".into()))?;

        let mut sys = RootSystem {
            cartan_type,
            rank,
            gram,
            cartan,
            inv_cartan_t,
            positive_roots: Vec::new(),
            root_index: HashMap::new(),
            noncompact,
        };
        sys.enumerate_positive_roots();
        Ok(sys)
    }

    /// Root-string closure under the simple reflections, starting from the simple roots.
    fn enumerate_positive_roots(&mut self) {
        let mut roots: Vec<LatticeVector> =
            (0..self.rank).map(|i| LatticeVector::simple(self.rank, i)).collect();
        let mut seen: std::collections::HashSet<LatticeVector> = roots.iter().cloned().collect();
        let mut frontier = roots.clone();
        while let Some(beta) = frontier.pop() {
            for i in 0..self.rank {
                let image = self.reflect_simple(i, &beta);
                if image.is_positive() && seen.insert(image.clone()) {
                    roots.push(image.clone());
                    frontier.push(image);
                }
            }
        }
        roots.sort_by(|a, b| a.height_lex_cmp(b));
        self.root_index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        self.positive_roots = roots;
    }

    /// Same roots, different grading.
    pub fn with_noncompact(&self, noncompact_simple: &[usize]) -> Result<Self> {
        let mut noncompact = vec![false; self.rank];
        for &i in noncompact_simple {
            if i == 0 || i > self.rank {
                return Err(Error::Config(format!("noncompact index {i} outside 1..={}", self.rank)));
            }
            noncompact[i - 1] = true;
        }
        Ok(RootSystem { noncompact, ..self.clone() })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.cartan_type.letter(), self.rank)
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram_matrix(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> LatticeVector {
        LatticeVector::simple(self.rank, i)
    }

    /// Index of a positive root in [`Self::positive_roots`].
    pub fn positive_root_index(&self, root: &LatticeVector) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn is_root(&self, v: &LatticeVector) -> bool {
        self.root_index.contains_key(v) || self.root_index.contains_key(&-v)
    }

    /// 1-based indices of the noncompact simple roots.
    pub fn noncompact_simple(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.noncompact[i]).map(|i| i + 1).collect()
    }

    pub fn is_noncompact_simple(&self, i: usize) -> bool {
        self.noncompact[i]
    }

    pub fn inner(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a.0[i] * self.gram[i][j] * b.0[j];
            }
        }
        s
    }

    pub fn squared_length(&self, v: &LatticeVector) -> i64 {
        self.inner(v, v)
    }

    pub fn is_long(&self, root: &LatticeVector) -> bool {
        let max = (0..self.rank).map(|i| self.gram[i][i]).max().unwrap_or(2);
        self.squared_length(root) == max
    }

    /// `⟨v, β∨⟩` for a lattice vector `v` and a root `β`.
    pub fn coroot_pairing(&self, v: &LatticeVector, beta: &LatticeVector) -> i64 {
        let num = 2 * self.inner(v, beta);
        let den = self.squared_length(beta);
        debug_assert_eq!(num % den, 0, "non-integral pairing with coroot");
        num / den
    }

    /// Coefficients of `β∨` on the simple coroots.
    pub fn coroot_coefficients(&self, beta: &LatticeVector) -> Vec<i64> {
        let len = self.squared_length(beta);
        (0..self.rank).map(|j| beta.0[j] * self.gram[j][j] / len).collect()
    }

    /// `s_i β`.
    pub fn reflect_simple(&self, i: usize, beta: &LatticeVector) -> LatticeVector {
        let c: i64 = (0..self.rank).map(|k| beta.0[k] * self.cartan[k][i]).sum();
        let mut out = beta.clone();
        out.0[i] -= c;
        out
    }

    /// `s_β v` for a root `β`.
    pub fn reflect(&self, beta: &LatticeVector, v: &LatticeVector) -> LatticeVector {
        let c = self.coroot_pairing(v, beta);
        v - &beta.scale(c)
    }

    /// `⟨λ, γ∨⟩`; `γ` must be a root.
    pub fn pairing(&self, lambda: &Weight, gamma: &LatticeVector) -> Result<Rational> {
        if !self.is_root(gamma) {
            return Err(Error::Domain(format!("{gamma} is not a root of {}", self.label())));
        }
        Ok(self.pairing_unchecked(lambda, gamma))
    }

    pub(crate) fn pairing_unchecked(&self, lambda: &Weight, gamma: &LatticeVector) -> Rational {
        self.coroot_coefficients(gamma)
            .iter()
            .zip(&lambda.0)
            .map(|(&c, &l)| l * c)
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Reflection of a weight in the hyperplane orthogonal to `β`.
    pub fn reflect_weight(&self, beta: &LatticeVector, lambda: &Weight) -> Weight {
        let c = self.pairing_unchecked(lambda, beta);
        lambda - &self.root_to_weight(beta).scale(c)
    }

    /// Fundamental-weight coordinates of a root-lattice vector.
    pub fn root_to_weight(&self, v: &LatticeVector) -> Weight {
        Weight(
            (0..self.rank)
                .map(|i| Rational::from_integer((0..self.rank).map(|k| v.0[k] * self.cartan[k][i]).sum()))
                .collect(),
        )
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_to_root_coords(&self, lambda: &Weight) -> Vec<Rational> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| self.inv_cartan_t[i][j] * lambda.0[j])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// The root-lattice vector equal to `λ`, if `λ` lies in the root lattice.
    pub fn weight_to_lattice(&self, lambda: &Weight) -> Option<LatticeVector> {
        let coords = self.weight_to_root_coords(lambda);
        if coords.iter().all(|c| c.is_integer()) {
            Some(LatticeVector(coords.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![Rational::one(); self.rank])
    }

    /// ε(μ) ∈ ℤ₂: parity of the noncompact part of `μ`.
    pub fn epsilon_grading(&self, mu: &LatticeVector) -> u8 {
        let s: i64 = (0..self.rank).filter(|&i| self.noncompact[i]).map(|i| mu.0[i]).sum();
        s.mod_floor(&2) as u8
    }

    /// `(−1)^{ε(μ)}`.
    pub fn grading_sign(&self, mu: &LatticeVector) -> i64 {
        if self.epsilon_grading(mu) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_compact_root(&self, root: &LatticeVector) -> bool {
        self.epsilon_grading(root) == 0
    }

    pub fn highest_root(&self) -> &LatticeVector {
        self.positive_roots.last().expect("nonempty root system")
    }

    pub fn highest_short_root(&self) -> &LatticeVector {
        let min = (0..self.rank).map(|i| self.gram[i][i]).min().unwrap_or(2);
        self.positive_roots.iter().rev().find(|r| self.squared_length(r) == min).expect("short roots exist")
    }

    /// Number of ways of writing `μ` as a sum of positive roots (with repetition).
    pub fn kostant_partition(&self, mu: &LatticeVector) -> u64 {
        if !mu.is_nonnegative() {
            return 0;
        }
        let mut memo = HashMap::new();
        partition_count(&self.positive_roots, 0, mu, &mut memo)
    }

    pub fn to_data(&self) -> RootData {
        RootData {
            cartan_type: self.label(),
            rank: self.rank,
            noncompact: self.noncompact_simple(),
            cartan_matrix: self.cartan.clone(),
            positive_roots: self
                .positive_roots
                .iter()
                .map(|r| RootEntry {
                    coeffs: r.0.clone(),
                    height: r.height(),
                    squared_length: self.squared_length(r),
                    compact: self.is_compact_root(r),
                })
                .collect(),
        }
    }
}

fn partition_count(
    roots: &[LatticeVector],
    k: usize,
    mu: &LatticeVector,
    memo: &mut HashMap<(usize, LatticeVector), u64>,
) -> u64 {
    if mu.is_zero() {
        return 1;
    }
    if k == roots.len() {
        return 0;
    }
    if let Some(&v) = memo.get(&(k, mu.clone())) {
        return v;
    }
    let mut total = 0;
    let mut rest = mu.clone();
    while rest.is_nonnegative() {
        total += partition_count(roots, k + 1, &rest, memo);
        rest = &rest - &roots[k];
    }
    memo.insert((k, mu.clone()), total);
    total
}

fn gram_matrix(ty: CartanType, n: usize) -> Result<Vec<Vec<i64>>> {
    let unsupported = || Error::Config(format!("unsupported root system {}{n}", ty.letter()));
    let mut g = vec![vec![0i64; n]; n];
    match ty {
        CartanType::A => {
            if n < 1 {
                return Err(unsupported());
            }
            for i in 0..n {
                g[i][i] = 2;
                if i + 1 < n {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
            }
        }
        CartanType::B | CartanType::C => {
            if n < 2 {
                return Err(unsupported());
            }
            let (body, last) = if ty == CartanType::B { (4, 2) } else { (2, 4) };
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = if i + 1 == n { last } else { body };
            }
            for i in 0..n - 1 {
                let v = if i + 2 == n { -2 } else { -body / 2 };
                g[i][i + 1] = v;
                g[i + 1][i] = v;
            }
        }
        CartanType::D => {
            if n < 4 {
                return Err(unsupported());
            }
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 2;
            }
            for i in 0..n - 2 {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            g[n - 3][n - 1] = -1;
            g[n - 1][n - 3] = -1;
        }
        CartanType::F => {
            if n != 4 {
                return Err(unsupported());
            }
            let diag = [4, 4, 2, 2];
            for i in 0..4 {
                g[i][i] = diag[i];
            }
            for (i, v) in [(0, -2), (1, -2), (2, -1)] {
                g[i][i + 1] = v;
                g[i + 1][i] = v;
            }
        }
        CartanType::G => {
            if n != 2 {
                return Err(unsupported());
            }
            // α₁ long, α₂ short.
            g[0][0] = 6;
            g[1][1] = 2;
            g[0][1] = -3;
            g[1][0] = -3;
        }
    }
    Ok(g)
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// JSON form of a root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootData {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub noncompact: Vec<usize>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<RootEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub coeffs: Vec<i64>,
    pub height: i64,
    pub squared_length: i64,
    pub compact: bool,
}
