//! Finitely generated abelian groups graded by Z/8, or only by parity when the
//! distribution inside the even and odd degrees is not known.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grading {
    /// Degrees in Z/8.
    Exact,
    /// Degrees in Z/2: 0 for even, 1 for odd.
    Parity,
}

impl Grading {
    fn modulus(self) -> i64 {
        match self {
            Grading::Exact => 8,
            Grading::Parity => 2,
        }
    }

    fn coarsest(self, other: Grading) -> Grading {
        if self == Grading::Parity || other == Grading::Parity {
            Grading::Parity
        } else {
            Grading::Exact
        }
    }
}

/// A graded group; in every degree a list of cyclic orders with 0 standing for Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedAbelianGroup {
    pub grading: Grading,
    /// Degree to invariant factors (torsion ascending, then zeros for free summands).
    pub degrees: BTreeMap<u8, Vec<u64>>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Invariant-factor form of a direct sum of cyclic groups.
pub fn canonical_orders(orders: &[u64]) -> Vec<u64> {
    let free = orders.iter().filter(|&&o| o == 0).count();
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders.iter().filter(|&&o| o > 1) {
        for (p, q) in prime_powers(o) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (k, q) in powers.iter().enumerate() {
            factors[len - 1 - k] *= q;
        }
    }
    factors.extend(std::iter::repeat_n(0, free));
    factors
}

fn tensor_cyclic(a: u64, b: u64) -> u64 {
    match (a, b) {
        (0, x) | (x, 0) => x,
        (x, y) => x.gcd(&y),
    }
}

fn tor_cyclic(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        1
    } else {
        a.gcd(&b)
    }
}

impl GradedAbelianGroup {
    pub fn zero() -> Self {
        GradedAbelianGroup { grading: Grading::Exact, degrees: BTreeMap::new() }
    }

    pub fn from_orders(grading: Grading, pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let m = grading.modulus();
        let mut raw: BTreeMap<u8, Vec<u64>> = BTreeMap::new();
        for (d, o) in pairs {
            if o != 1 {
                raw.entry(d.rem_euclid(m) as u8).or_default().push(o);
            }
        }
        let degrees = raw
            .into_iter()
            .map(|(d, os)| (d, canonical_orders(&os)))
            .filter(|(_, os)| !os.is_empty())
            .collect();
        GradedAbelianGroup { grading, degrees }
    }

    /// `Z^rank` in degree `d`.
    pub fn free(d: i64, rank: usize) -> Self {
        Self::from_orders(Grading::Exact, std::iter::repeat_n((d, 0), rank))
    }

    pub fn cyclic(d: i64, order: u64) -> Self {
        Self::from_orders(Grading::Exact, [(d, order)])
    }

    /// Free of the given rank, known only to sit in even degrees.
    pub fn even_free(rank: usize) -> Self {
        Self::from_orders(Grading::Parity, std::iter::repeat_n((0, 0), rank))
    }

    fn pairs(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.degrees.iter().flat_map(|(&d, os)| os.iter().map(move |&o| (d as i64, o)))
    }

    /// Forgets everything but the parity of degrees.
    pub fn to_parity(&self) -> Self {
        Self::from_orders(Grading::Parity, self.pairs())
    }

    fn coerce(&self, g: Grading) -> Self {
        if self.grading == g {
            self.clone()
        } else {
            self.to_parity()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.pairs().all(|(_, o)| o == 0)
    }

    /// Free rank.
    pub fn rank(&self) -> usize {
        self.pairs().filter(|&(_, o)| o == 0).count()
    }

    pub fn rank_in(&self, d: i64) -> usize {
        let d = d.rem_euclid(self.grading.modulus()) as u8;
        self.degrees.get(&d).map_or(0, |os| os.iter().filter(|&&o| o == 0).count())
    }

    /// Whether all free summands sit in even degrees.
    pub fn even_concentrated(&self) -> bool {
        self.pairs().all(|(d, _)| d % 2 == 0)
    }

    pub fn shift(&self, k: i64) -> Self {
        Self::from_orders(self.grading, self.pairs().map(|(d, o)| (d + k, o)))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let g = self.grading.coarsest(other.grading);
        let (a, b) = (self.coerce(g), other.coerce(g));
        Self::from_orders(g, a.pairs().chain(b.pairs()).collect::<Vec<_>>())
    }

    fn convolve(&self, other: &Self, f: fn(u64, u64) -> u64) -> Self {
        let g = self.grading.coarsest(other.grading);
        let (a, b) = (self.coerce(g), other.coerce(g));
        let mut out = Vec::new();
        for (d, x) in a.pairs() {
            for (e, y) in b.pairs() {
                out.push((d + e, f(x, y)));
            }
        }
        Self::from_orders(g, out)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        self.convolve(other, tensor_cyclic)
    }

    pub fn tor(&self, other: &Self) -> Self {
        self.convolve(other, tor_cyclic)
    }

    /// `tensor ⊕ tor[-1]`.
    pub fn kunneth(&self, other: &Self) -> Self {
        self.tensor(other).direct_sum(&self.tor(other).shift(-1))
    }

    /// `|sum_d (-1)^d rank(H_d)|`.
    pub fn euler_abs(&self) -> u64 {
        let chi: i64 = self.pairs().filter(|&(_, o)| o == 0).map(|(d, _)| if d % 2 == 0 { 1 } else { -1 }).sum();
        chi.unsigned_abs()
    }
}

impl fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&d, os) in &self.degrees {
            let deg = match self.grading {
                Grading::Exact => d.to_string(),
                Grading::Parity if d == 0 => "even".into(),
                Grading::Parity => "odd".into(),
            };
            let free = os.iter().filter(|&&o| o == 0).count();
            for &o in os.iter().filter(|&&o| o > 1) {
                parts.push(format!("Z/{o}[{deg}]"));
            }
            match free {
                0 => {}
                1 => parts.push(format!("Z[{deg}]")),
                n => parts.push(format!("Z^{n}[{deg}]")),
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}
