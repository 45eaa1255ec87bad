//! Classical Kazhdan–Lusztig polynomials.
//!
//! [`KlTable`] evaluates the w₀-twisted recursions a) and b), where the
//! unknown is `C_{X,Y} := P_{w₀X, w₀Y}`. [`KlOracle`] solves the
//! R-polynomial triangular system for the whole group instead and shares no
//! code with the recursion.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::IntPolynomial;
use crate::weyl::{CoxeterGroup, ElemId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recursion,
    Oracle,
}

/// Memoized recursion. Entries are keyed by the literal subscript pair
/// `(u, v)` of `P_{u,v}`; the twist by w₀ happens only in [`KlTable::twisted`].
#[derive(Debug, Clone)]
pub struct KlTable {
    group: Arc<CoxeterGroup>,
    memo: HashMap<(ElemId, ElemId), IntPolynomial>,
}

impl KlTable {
    pub fn new(group: Arc<CoxeterGroup>) -> Self {
        KlTable { group, memo: HashMap::new() }
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn method(&self) -> Method {
        Method::Recursion
    }

    /// `P_{u,v}` with literal subscripts.
    pub fn kl_poly(&mut self, u: ElemId, v: ElemId) -> IntPolynomial {
        let w0 = self.group.longest();
        let x = self.group.mul(w0, u);
        let y = self.group.mul(w0, v);
        self.twisted(x, y)
    }

    /// `P_{w₀x, w₀y}`, the polynomial the recursions are phrased in.
    pub fn twisted(&mut self, x: ElemId, y: ElemId) -> IntPolynomial {
        let g = Arc::clone(&self.group);
        let w0 = g.longest();
        let key = (g.mul(w0, x), g.mul(w0, y));
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let p = self.compute(&g, x, y);
        self.memo.insert(key, p.clone());
        p
    }

    fn compute(&mut self, g: &CoxeterGroup, x: ElemId, y: ElemId) -> IntPolynomial {
        if x == y {
            return IntPolynomial::one();
        }
        // P_{w₀x,w₀y} ≠ 0 iff w₀x ≤ w₀y iff y ≤ x.
        if !g.bruhat_leq(y, x) {
            return IntPolynomial::zero();
        }
        // x ≠ e here, so x has a right descent.
        let s = (0..g.num_generators())
            .find(|&s| g.is_right_descent(x, s))
            .expect("nonidentity element has a descent");
        let xs = g.right_mul(x, s);
        if !g.is_right_descent(y, s) {
            // a): ys > y, so P_{w₀x,w₀y} = P_{w₀xs,w₀y}.
            return self.twisted(xs, y);
        }
        // b) with (xs, y) in the roles of (x, y):
        //   C_{x,y} = C_{xs,ys} − q·C_{xs,y} + Σ_{z<zs} a_{z,y,1} q^{(ℓ(z)−ℓ(y)+1)/2} C_{xs,z}.
        let ys = g.right_mul(y, s);
        let mut p = &self.twisted(xs, ys) - &self.twisted(xs, y).shift(1);
        let ly = g.length(y);
        for z in g.interval(y, xs) {
            let lz = g.length(z);
            if g.is_right_descent(z, s) || (lz - ly).is_multiple_of(2) {
                continue;
            }
            let a = self.level_coefficient(z, y, 1);
            if a != 0 {
                let term = self.twisted(xs, z).scale(a).shift((lz - ly).div_ceil(2));
                p = &p + &term;
            }
        }
        p
    }

    /// Coefficient of `q^{(ℓ(x)−ℓ(y)−j)/2}` in `P_{w₀x, w₀y}`: the multiplicity
    /// of `L(yλ)` in level `j` of the Jantzen filtration of `M(xλ)`.
    pub fn level_coefficient(&mut self, x: ElemId, y: ElemId, j: usize) -> i64 {
        level_slot(self.group.length(x), self.group.length(y), j).map_or(0, |k| self.twisted(x, y).coeff(k))
    }

    /// Fills every entry; useful before cloning the table across threads.
    pub fn fill(&mut self) {
        let g = Arc::clone(&self.group);
        for x in g.elements() {
            for y in g.elements() {
                self.twisted(x, y);
            }
        }
    }
}

/// Exponent `(lx − ly − j)/2` when it is a nonnegative integer.
pub(crate) fn level_slot(lx: usize, ly: usize, j: usize) -> Option<usize> {
    let d = lx as i64 - ly as i64 - j as i64;
    (d >= 0 && d % 2 == 0).then_some((d / 2) as usize)
}

/// Whole-group table from R-polynomials:
/// `q^{ℓ(w)−ℓ(x)} P_{x,w}(q⁻¹) − P_{x,w}(q) = Σ_{x<y≤w} R_{x,y} P_{y,w}`.
#[derive(Debug, Clone)]
pub struct KlOracle {
    group: Arc<CoxeterGroup>,
    p: Vec<IntPolynomial>,
}

impl KlOracle {
    pub fn new(group: Arc<CoxeterGroup>) -> Self {
        let g = &*group;
        let n = g.order();
        let r = r_polynomials(g);
        let mut p = vec![IntPolynomial::zero(); n * n];
        let mut by_length: Vec<ElemId> = g.elements().collect();
        by_length.sort_by_key(|&x| std::cmp::Reverse(g.length(x)));
        for w in g.elements() {
            p[w * n + w] = IntPolynomial::one();
            for &x in &by_length {
                if x == w || !g.bruhat_leq(x, w) {
                    continue;
                }
                let mut rhs = IntPolynomial::zero();
                for y in g.interval(x, w) {
                    if y != x {
                        rhs = &rhs + &(&r[x * n + y] * &p[y * n + w]);
                    }
                }
                let d = g.length(w) - g.length(x);
                let coeffs = (0..d.div_ceil(2)).map(|i| -rhs.coeff(i)).collect();
                p[x * n + w] = IntPolynomial::new(coeffs);
            }
        }
        KlOracle { group, p }
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn method(&self) -> Method {
        Method::Oracle
    }

    /// `P_{u,v}` with literal subscripts.
    pub fn kl_poly(&self, u: ElemId, v: ElemId) -> &IntPolynomial {
        &self.p[u * self.group.order() + v]
    }

    /// `P_{w₀x, w₀y}`.
    pub fn twisted(&self, x: ElemId, y: ElemId) -> &IntPolynomial {
        let w0 = self.group.longest();
        self.kl_poly(self.group.mul(w0, x), self.group.mul(w0, y))
    }

    pub fn level_coefficient(&self, x: ElemId, y: ElemId, j: usize) -> i64 {
        level_slot(self.group.length(x), self.group.length(y), j).map_or(0, |k| self.twisted(x, y).coeff(k))
    }
}

/// Dense table of R-polynomials `R_{x,w}`, row-major in `x`.
pub fn r_polynomials(g: &CoxeterGroup) -> Vec<IntPolynomial> {
    let n = g.order();
    let q_minus_1 = IntPolynomial::new(vec![-1, 1]);
    let mut r = vec![IntPolynomial::zero(); n * n];
    // Elements are enumerated by nondecreasing length, so `ws` precedes `w`.
    for w in g.elements() {
        if w == g.identity() {
            r[0] = IntPolynomial::one();
            continue;
        }
        let s = (0..g.num_generators()).find(|&s| g.is_right_descent(w, s)).unwrap();
        let ws = g.right_mul(w, s);
        for x in g.elements() {
            if !g.bruhat_leq(x, w) {
                continue;
            }
            let xs = g.right_mul(x, s);
            r[x * n + w] = if g.is_right_descent(x, s) {
                r[xs * n + ws].clone()
            } else {
                &(&q_minus_1 * &r[x * n + ws]) + &r[xs * n + ws].shift(1)
            };
        }
    }
    r
}
