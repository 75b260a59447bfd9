//! Orientation census: how many tiles of each chirality carry each power
//! `x^k` of the orientation factor after `n` inflation steps.
//!
//! Three independent routes are provided: the coefficient recursion, powers
//! of the x-graded substitution matrix, and direct counting in a patch.

use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::Zero;

use super::patch::Patch;
use super::tile::Chirality;
use crate::error::{Error, Result};

/// Tile counts `f⁺_n(k)`, `f⁻_n(k)` for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: u32,
    pub fplus: Vec<BigUint>,
    pub fminus: Vec<BigUint>,
}

impl Census {
    fn zeros(n: u32) -> Self {
        let len = n as usize + 1;
        Census {
            n,
            fplus: vec![BigUint::zero(); len],
            fminus: vec![BigUint::zero(); len],
        }
    }

    /// `f_n(k) = f⁺_n(k) + f⁻_n(k)`.
    pub fn totals(&self) -> Vec<BigUint> {
        self.fplus.iter().zip(&self.fminus).map(|(a, b)| a + b).collect()
    }

    pub fn total(&self) -> BigUint {
        self.totals().into_iter().sum()
    }

    /// `f⁺_n(k) = f⁻_n(n − k)` for every k.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.fplus.iter().eq(self.fminus.iter().rev())
    }

    /// The interleaved ordering
    /// `f⁺(0) < f⁻(0) < f⁺(1) < f⁻(1) < … ` up to the middle, closed by
    /// `f⁺(n/2) = f⁻(n/2)` for even n and `f⁺((n−1)/2) = f⁻((n+1)/2)` for
    /// odd n.
    pub fn interleaving_holds(&self) -> bool {
        let n = self.n as usize;
        let half = n / 2;
        let mut chain: Vec<&BigUint> = Vec::new();
        for k in 0..half {
            chain.push(&self.fplus[k]);
            chain.push(&self.fminus[k]);
        }
        let (lhs, rhs) = if n.is_multiple_of(2) {
            (&self.fplus[half], &self.fminus[half])
        } else {
            (&self.fplus[half], &self.fminus[half + 1])
        };
        chain.push(lhs);
        chain.windows(2).all(|w| w[0] < w[1]) && lhs == rhs
    }

    /// `f_n(k) > f_n(k − 1)` for `1 ≤ k ≤ ⌊n/2⌋ − 1`.
    pub fn totals_increase_to_middle(&self) -> bool {
        let f = self.totals();
        let upper = (self.n as usize / 2).saturating_sub(1);
        (1..=upper).all(|k| f[k] > f[k - 1])
    }
}

/// Census via `f⁺_{n+1}(k) = 2f⁺_n(k) + 3f⁻_n(k−1)` and
/// `f⁻_{n+1}(k) = 3f⁺_n(k) + 2f⁻_n(k−1)`.
pub fn census_recursion(n: u32, seed: (u64, u64)) -> Census {
    let mut c = Census::zeros(0);
    c.fplus[0] = BigUint::from(seed.0);
    c.fminus[0] = BigUint::from(seed.1);
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    for step in 0..n {
        let mut next = Census::zeros(step + 1);
        for k in 0..=(step as usize + 1) {
            let fp = c.fplus.get(k);
            let fm_prev = k.checked_sub(1).and_then(|j| c.fminus.get(j));
            let mut plus = BigUint::zero();
            let mut minus = BigUint::zero();
            if let Some(fp) = fp {
                plus += &two * fp;
                minus += &three * fp;
            }
            if let Some(fm) = fm_prev {
                plus += &three * fm;
                minus += &two * fm;
            }
            next.fplus[k] = plus;
            next.fminus[k] = minus;
        }
        c = next;
    }
    c
}

/// A polynomial in the orientation variable x with nonnegative integer
/// coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct XPoly(pub Vec<BigUint>);

impl XPoly {
    pub fn constant(c: u64) -> Self {
        XPoly(vec![BigUint::from(c)])
    }

    /// `c·x^k`.
    pub fn monomial(c: u64, k: usize) -> Self {
        let mut v = vec![BigUint::zero(); k + 1];
        v[k] = BigUint::from(c);
        XPoly(v)
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        self.0.get(k).cloned().unwrap_or_default()
    }

    /// Degree of the highest nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }
}

impl Add for &XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        let len = self.0.len().max(rhs.0.len());
        XPoly((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Mul for &XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return XPoly::default();
        }
        let mut out = vec![BigUint::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        XPoly(out)
    }
}

/// A 2×2 matrix over [`XPoly`], rows and columns indexed (+, −).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XPolyMatrix(pub [[XPoly; 2]; 2]);

impl XPolyMatrix {
    pub fn identity() -> Self {
        XPolyMatrix([
            [XPoly::constant(1), XPoly::constant(0)],
            [XPoly::constant(0), XPoly::constant(1)],
        ])
    }

    /// `[[2, 3x], [3, 2x]]`: column j lists the children of a parent of
    /// chirality j, graded by the extra `2φ` rotation they inherit.
    pub fn pinwheel() -> Self {
        XPolyMatrix([
            [XPoly::constant(2), XPoly::monomial(3, 1)],
            [XPoly::constant(3), XPoly::monomial(2, 1)],
        ])
    }

    pub fn mul(&self, rhs: &XPolyMatrix) -> XPolyMatrix {
        let a = &self.0;
        let b = &rhs.0;
        let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        XPolyMatrix([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn pow(&self, mut n: u32) -> XPolyMatrix {
        let mut base = self.clone();
        let mut acc = XPolyMatrix::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: (u64, u64)) -> [XPoly; 2] {
        let (p, m) = (XPoly::constant(v.0), XPoly::constant(v.1));
        let row = |i: usize| &(&self.0[i][0] * &p) + &(&self.0[i][1] * &m);
        [row(0), row(1)]
    }
}

/// Census as the coefficients of `M^n · seed`.
pub fn census_matrix(n: u32, seed: (u64, u64)) -> Census {
    let [plus, minus] = XPolyMatrix::pinwheel().pow(n).apply(seed);
    let len = n as usize + 1;
    Census {
        n,
        fplus: (0..len).map(|k| plus.coeff(k)).collect(),
        fminus: (0..len).map(|k| minus.coeff(k)).collect(),
    }
}

/// Census by counting the tiles of a patch grouped by chirality and number
/// of `2φ` rotations, ignoring quarter turns.
pub fn census_count(patch: &Patch) -> Result<Census> {
    let n = patch.generation();
    let mut c = Census::zeros(n);
    for t in patch.tiles() {
        let k = t.angle.dphi as usize;
        if k > n as usize {
            return Err(Error::Input(format!(
                "tile orientation x^{k} exceeds generation {n}; seed tiles must be unrotated"
            )));
        }
        match t.chi {
            Chirality::Plus => c.fplus[k] += 1u32,
            Chirality::Minus => c.fminus[k] += 1u32,
        }
    }
    Ok(c)
}
