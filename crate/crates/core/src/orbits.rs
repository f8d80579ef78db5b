//! Partitions, Jordan matrices, seeded orbit sampling and vanishing tests of
//! polynomial families on nilpotent orbits.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::fields::Field;
use crate::matrix::MatrixPoint;
use crate::poly::{PolyError, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitError {
    InvalidPartition(String),
    WeightMismatch { expected: usize, found: usize },
    Range { what: &'static str, value: usize, min: usize, max: usize },
    NotSquare { rows: usize, cols: usize },
    NotNilpotent,
    Poly(PolyError),
}

impl fmt::Display for OrbitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitError::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            OrbitError::WeightMismatch { expected, found } => {
                write!(f, "partition weight {found} does not match {expected}")
            }
            OrbitError::Range { what, value, min, max } => write!(f, "{what} = {value} outside [{min}, {max}]"),
            OrbitError::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            OrbitError::NotNilpotent => f.write_str("matrix is not nilpotent"),
            OrbitError::Poly(e) => fmt::Display::fmt(e, f),
        }
    }
}

impl core::error::Error for OrbitError {}

impl From<PolyError> for OrbitError {
    fn from(e: PolyError) -> Self {
        OrbitError::Poly(e)
    }
}

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, OrbitError> {
        if parts.contains(&0) {
            return Err(OrbitError::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(OrbitError::InvalidPartition("parts must be weakly decreasing".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, 0 for the empty partition.
    pub fn largest(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Transposed Young diagram: part `i` counts the parts `>= i`.
    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.largest()).map(|i| self.parts.iter().filter(|&&p| p >= i).count()).collect();
        Partition { parts }
    }

    /// Dominance order: every partial sum of `self` is at most that of `other`.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool, OrbitError> {
        if self.weight() != other.weight() {
            return Err(OrbitError::WeightMismatch { expected: other.weight(), found: self.weight() });
        }
        let (mut a, mut b) = (0, 0);
        for k in 0..self.len().max(other.len()) {
            a += self.parts.get(k).copied().unwrap_or(0);
            b += other.parts.get(k).copied().unwrap_or(0);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = OrbitError;

    /// Comma-separated parts, e.g. `2,2,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| OrbitError::InvalidPartition(alloc::format!("bad part {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `(e^r, f)` where `n = re + f` and `0 <= f < e`.
pub fn partition_mu(n: usize, e: usize) -> Result<Partition, OrbitError> {
    if e == 0 || e >= n {
        return Err(OrbitError::Range { what: "e", value: e, min: 1, max: n.saturating_sub(1) });
    }
    let mut parts = alloc::vec![e; n / e];
    if !n.is_multiple_of(e) {
        parts.push(n % e);
    }
    Ok(Partition { parts })
}

/// Block-diagonal nilpotent matrix with an upper shift block per part.
pub fn jordan_matrix<F: Field>(field: &F, lambda: &Partition, n: usize) -> Result<MatrixPoint<F>, OrbitError> {
    if lambda.weight() != n {
        return Err(OrbitError::WeightMismatch { expected: n, found: lambda.weight() });
    }
    let mut m = MatrixPoint::zeros(field, n, n);
    let mut start = 0;
    for &p in lambda.parts() {
        for k in start..start + p - 1 {
            m.set(k, k + 1, field.one());
        }
        start += p;
    }
    Ok(m)
}

/// Jordan type of a nilpotent matrix, read off the ranks of its powers.
pub fn jordan_type<F: Field>(m: &MatrixPoint<F>) -> Result<Partition, OrbitError> {
    if !m.is_square() {
        return Err(OrbitError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    // number of blocks of size >= k is rank(M^(k-1)) - rank(M^k)
    let mut conj = Vec::new();
    let mut prev_rank = n;
    let mut power = MatrixPoint::identity(m.field(), n);
    for _ in 0..n {
        power = power.mul(m);
        let r = power.rank();
        if prev_rank > r {
            conj.push(prev_rank - r);
        }
        prev_rank = r;
    }
    if prev_rank != 0 {
        return Err(OrbitError::NotNilpotent);
    }
    Ok(Partition { parts: conj }.conjugate())
}

fn sample_element<F: Field>(field: &F, rng: &mut ChaCha8Rng) -> F::Elem {
    let p = field.characteristic();
    field.from_bigint(&BigInt::from(rng.next_u64() % p))
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> i64 {
    // uniform on {-3..3} \ {0}
    let k = (rng.next_u32() % 6) as i64;
    if k < 3 {
        k - 3
    } else {
        k - 2
    }
}

/// `g M g^-1` for an invertible `g` drawn from `seed`.
///
/// Over the rationals `g` is a product of elementary transvections with
/// entries in `[-3, 3]`, applied as paired row and column operations so no
/// inverse is ever computed. Over a prime field `g` is uniform among
/// invertible matrices, found by rejection sampling.
pub fn random_conjugate<F: Field>(m: &MatrixPoint<F>, seed: u64) -> MatrixPoint<F> {
    let field = m.field();
    let n = m.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n < 2 {
        return m.clone();
    }
    if field.characteristic() == 0 {
        let mut out = m.clone();
        for _ in 0..2 * n {
            let i = (rng.next_u32() as usize) % n;
            let j = (i + 1 + (rng.next_u32() as usize) % (n - 1)) % n;
            let t = field.from_i64(small_nonzero(&mut rng));
            // E = I + t e_ij: row i += t row j, then column j -= t column i
            for c in 0..n {
                let v = out.get(j, c).clone();
                let mut x = out.get(i, c).clone();
                field.sub_mul_assign(&mut x, &field.neg(&t), &v);
                out.set(i, c, x);
            }
            for r in 0..n {
                let v = out.get(r, i).clone();
                let mut x = out.get(r, j).clone();
                field.sub_mul_assign(&mut x, &t, &v);
                out.set(r, j, x);
            }
        }
        out
    } else {
        loop {
            let g = MatrixPoint::from_fn(field, n, n, |_, _| sample_element(field, &mut rng));
            if let Some(gi) = g.inverse() {
                return g.mul(m).mul(&gi);
            }
        }
    }
}

/// Sample `index` of the orbit through `point`; parallel and serial runs
/// agree because each sample has its own seed.
pub fn orbit_sample<F: Field>(point: &MatrixPoint<F>, seed: u64, index: usize) -> MatrixPoint<F> {
    random_conjugate(point, seed.wrapping_add(index as u64))
}

/// Where a polynomial family was found not to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingWitness<F: Field> {
    pub generator: usize,
    /// `None` for the Jordan point itself, else the sample index.
    pub sample: Option<usize>,
    pub point: MatrixPoint<F>,
    pub value: F::Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport<F: Field> {
    pub lambda: Partition,
    pub samples: usize,
    pub seed: u64,
    /// Per generator: zero at the Jordan point and at every sample.
    pub all_zero: Vec<bool>,
    pub witness: Option<VanishingWitness<F>>,
}

impl<F: Field> VanishingReport<F> {
    pub fn vanishes(&self) -> bool {
        self.all_zero.iter().all(|&z| z)
    }
}

/// Evaluates every generator at the Jordan point of `lambda` and at
/// `samples` seeded conjugates of it.
pub fn vanishing_report<F: Field>(
    field: &F,
    generators: &[Polynomial<F>],
    lambda: &Partition,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<VanishingReport<F>, OrbitError> {
    let jordan = jordan_matrix(field, lambda, n)?;
    let mut all_zero = alloc::vec![true; generators.len()];
    let mut witness = None;
    let points = core::iter::once((None, jordan.clone())).chain((0..samples).map(|k| (Some(k), orbit_sample(&jordan, seed, k))));
    for (sample, point) in points {
        for (k, g) in generators.iter().enumerate() {
            if !all_zero[k] {
                continue;
            }
            let value = g.evaluate(&point)?;
            if !field.is_zero(&value) {
                all_zero[k] = false;
                if witness.is_none() {
                    witness = Some(VanishingWitness { generator: k, sample, point: point.clone(), value });
                }
            }
        }
    }
    Ok(VanishingReport { lambda: lambda.clone(), samples, seed, all_zero, witness })
}
