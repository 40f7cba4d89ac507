//! Max-min algebra over possibility values.
//!
//! Only `min` and `max` are ever applied to values, so every derived value is
//! bit-identical to one of the inputs, `0` or `1`. Equality tests are exact.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("possibility value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("possibility value is not finite")]
    NotFinite,
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("duplicate index label `{0}`")]
    DuplicateLabel(String),
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("shape mismatch: left is {left_dim}x{left_dim} over [{left_labels}], right is {right_dim} over [{right_labels}]")]
    ShapeMismatch {
        left_dim: usize,
        left_labels: String,
        right_dim: usize,
        right_labels: String,
    },
}

/// A possibility degree in `[0, 1]`.
#[derive(Clone, Copy, Default)]
pub struct Possibility(f64);

impl Possibility {
    pub const ZERO: Possibility = Possibility(0.0);
    pub const ONE: Possibility = Possibility(1.0);

    pub fn new(value: f64) -> Result<Self, AlgebraError> {
        if !value.is_finite() {
            return Err(AlgebraError::NotFinite);
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(AlgebraError::OutOfRange(value));
        }
        // normalise -0.0
        Ok(Possibility(if value == 0.0 { 0.0 } else { value }))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Lattice meet (`min`).
    pub fn meet(self, other: Possibility) -> Possibility {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }

    /// Lattice join (`max`).
    pub fn join(self, other: Possibility) -> Possibility {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0.0
    }

    /// Join of an iterator; the empty join is `0`.
    pub fn join_all<I: IntoIterator<Item = Possibility>>(iter: I) -> Possibility {
        iter.into_iter().fold(Possibility::ZERO, Possibility::join)
    }

    /// Meet of an iterator; the empty meet is `1`.
    pub fn meet_all<I: IntoIterator<Item = Possibility>>(iter: I) -> Possibility {
        iter.into_iter().fold(Possibility::ONE, Possibility::meet)
    }
}

impl TryFrom<f64> for Possibility {
    type Error = AlgebraError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Possibility::new(value)
    }
}

impl From<Possibility> for f64 {
    fn from(p: Possibility) -> f64 {
        p.0
    }
}

impl PartialEq for Possibility {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Possibility {}

impl PartialOrd for Possibility {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Possibility {
    fn cmp(&self, other: &Self) -> Ordering {
        // both values are finite
        self.0
            .partial_cmp(&other.0)
            .expect("possibility values are finite")
    }
}

impl std::hash::Hash for Possibility {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Debug for Possibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shortest decimal that parses back to the same `f64`.
impl fmt::Display for Possibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_labels(labels: &[String]) -> Result<(), AlgebraError> {
    if labels.is_empty() {
        return Err(AlgebraError::EmptyDimension);
    }
    let mut seen = std::collections::HashSet::with_capacity(labels.len());
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(AlgebraError::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

/// A vector of possibilities indexed by labelled positions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FuzzyVector {
    labels: Vec<String>,
    entries: Vec<Possibility>,
}

impl FuzzyVector {
    pub fn new(labels: Vec<String>, entries: Vec<Possibility>) -> Result<Self, AlgebraError> {
        check_labels(&labels)?;
        if entries.len() != labels.len() {
            return Err(AlgebraError::EntryCount {
                expected: labels.len(),
                found: entries.len(),
            });
        }
        Ok(FuzzyVector { labels, entries })
    }

    pub fn from_values(labels: Vec<String>, values: &[f64]) -> Result<Self, AlgebraError> {
        let entries = values
            .iter()
            .map(|&v| Possibility::new(v))
            .collect::<Result<Vec<_>, _>>()?;
        FuzzyVector::new(labels, entries)
    }

    pub fn zeros(labels: Vec<String>) -> Result<Self, AlgebraError> {
        let n = labels.len();
        FuzzyVector::new(labels, vec![Possibility::ZERO; n])
    }

    pub fn constant(labels: Vec<String>, value: Possibility) -> Result<Self, AlgebraError> {
        let n = labels.len();
        FuzzyVector::new(labels, vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Possibility] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Possibility {
        self.entries[i]
    }

    /// Entrywise join.
    pub fn join(&self, other: &FuzzyVector) -> Result<FuzzyVector, AlgebraError> {
        self.check_same(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.join(*b))
            .collect();
        Ok(FuzzyVector {
            labels: self.labels.clone(),
            entries,
        })
    }

    /// Entrywise `<=`.
    pub fn le(&self, other: &FuzzyVector) -> bool {
        self.labels == other.labels && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    fn check_same(&self, other: &FuzzyVector) -> Result<(), AlgebraError> {
        if self.labels != other.labels {
            return Err(AlgebraError::ShapeMismatch {
                left_dim: self.dim(),
                left_labels: self.labels.join(","),
                right_dim: other.dim(),
                right_labels: other.labels.join(","),
            });
        }
        Ok(())
    }
}

/// A dense square matrix of possibilities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FuzzyMatrix {
    labels: Vec<String>,
    entries: Vec<Possibility>,
}

impl FuzzyMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(labels: Vec<String>, entries: Vec<Possibility>) -> Result<Self, AlgebraError> {
        check_labels(&labels)?;
        let expected = labels.len() * labels.len();
        if entries.len() != expected {
            return Err(AlgebraError::EntryCount {
                expected,
                found: entries.len(),
            });
        }
        Ok(FuzzyMatrix { labels, entries })
    }

    pub fn from_rows(labels: Vec<String>, rows: &[&[f64]]) -> Result<Self, AlgebraError> {
        let mut entries = Vec::with_capacity(rows.len() * rows.len());
        for row in rows {
            if row.len() != labels.len() {
                return Err(AlgebraError::EntryCount {
                    expected: labels.len(),
                    found: row.len(),
                });
            }
            for &v in row.iter() {
                entries.push(Possibility::new(v)?);
            }
        }
        FuzzyMatrix::new(labels, entries)
    }

    pub fn zeros(labels: Vec<String>) -> Result<Self, AlgebraError> {
        let n = labels.len();
        FuzzyMatrix::new(labels, vec![Possibility::ZERO; n * n])
    }

    /// `1` on the diagonal, `0` elsewhere.
    pub fn identity(labels: Vec<String>) -> Result<Self, AlgebraError> {
        let mut m = FuzzyMatrix::zeros(labels)?;
        for i in 0..m.dim() {
            m.set(i, i, Possibility::ONE);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Possibility] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Possibility {
        self.entries[i * self.dim() + j]
    }

    pub fn row(&self, i: usize) -> &[Possibility] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: Possibility) {
        let n = self.dim();
        self.entries[i * n + j] = value;
    }

    /// Principal submatrix on the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<FuzzyMatrix, AlgebraError> {
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let entries = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        FuzzyMatrix::new(labels, entries)
    }

    /// Max-min composition `self ∘ other`.
    pub fn compose(&self, other: &FuzzyMatrix) -> Result<FuzzyMatrix, AlgebraError> {
        if self.labels != other.labels {
            return Err(self.mismatch(other.dim(), &other.labels));
        }
        let n = self.dim();
        let mut entries = vec![Possibility::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let left = self.get(i, k);
                if left.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = e.join(left.meet(other.get(k, j)));
                }
            }
        }
        Ok(FuzzyMatrix {
            labels: self.labels.clone(),
            entries,
        })
    }

    /// Max-min matrix-vector product `self ∘ x`.
    pub fn apply(&self, x: &FuzzyVector) -> Result<FuzzyVector, AlgebraError> {
        if self.labels != x.labels {
            return Err(self.mismatch(x.dim(), &x.labels));
        }
        let entries = (0..self.dim())
            .map(|i| {
                Possibility::join_all(self.row(i).iter().zip(&x.entries).map(|(a, b)| a.meet(*b)))
            })
            .collect();
        Ok(FuzzyVector {
            labels: self.labels.clone(),
            entries,
        })
    }

    /// Entrywise join.
    pub fn join(&self, other: &FuzzyMatrix) -> Result<FuzzyMatrix, AlgebraError> {
        if self.labels != other.labels {
            return Err(self.mismatch(other.dim(), &other.labels));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.join(*b))
            .collect();
        Ok(FuzzyMatrix {
            labels: self.labels.clone(),
            entries,
        })
    }

    /// Entrywise `<=`.
    pub fn le(&self, other: &FuzzyMatrix) -> bool {
        self.labels == other.labels && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// `P⁺ = P ∨ P² ∨ … ∨ Pⁿ`, by repeated squaring of the running join.
    ///
    /// If `T` holds the join of the first `m` powers then `T ∨ T∘T` holds the
    /// join of the first `2m`; powers beyond `n` add nothing, so the loop stops
    /// once `m >= n`.
    pub fn transitive_closure(&self) -> FuzzyMatrix {
        let n = self.dim();
        let mut acc = self.clone();
        let mut span = 1;
        while span < n {
            let squared = acc.compose(&acc).expect("same labels");
            let next = acc.join(&squared).expect("same labels");
            span *= 2;
            if next == acc {
                break;
            }
            acc = next;
        }
        acc
    }

    /// `P⁺` by accumulating `n` successive powers; the reference route for
    /// [`FuzzyMatrix::transitive_closure`].
    pub fn closure_by_powers(&self) -> FuzzyMatrix {
        let mut power = self.clone();
        let mut acc = self.clone();
        for _ in 1..self.dim() {
            power = power.compose(self).expect("same labels");
            acc = acc.join(&power).expect("same labels");
        }
        acc
    }

    fn mismatch(&self, right_dim: usize, right_labels: &[String]) -> AlgebraError {
        AlgebraError::ShapeMismatch {
            left_dim: self.dim(),
            left_labels: self.labels.join(","),
            right_dim,
            right_labels: right_labels.join(","),
        }
    }
}

/// One step of `Φ(x) = A∘x ∨ b`.
pub fn phi(a: &FuzzyMatrix, b: &FuzzyVector, x: &FuzzyVector) -> Result<FuzzyVector, AlgebraError> {
    a.apply(x)?.join(b)
}

/// The `n`-th iterate of `Φ` starting from the zero vector.
pub fn iterate(a: &FuzzyMatrix, b: &FuzzyVector, n: usize) -> Result<FuzzyVector, AlgebraError> {
    let mut x = FuzzyVector::zeros(a.labels.clone())?;
    for _ in 0..n {
        x = phi(a, b, &x)?;
    }
    Ok(x)
}

/// Solution of `X = A∘X ∨ b` together with the number of iterations taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub solution: FuzzyVector,
    /// Smallest `n` with `X⁽ⁿ⁾ = X⁽ⁿ⁺¹⁾`; never exceeds the dimension.
    pub iterations: usize,
}

/// Least solution of `X = A∘X ∨ b`, iterating from `X⁽⁰⁾ = 0`.
pub fn least_fixed_point(a: &FuzzyMatrix, b: &FuzzyVector) -> Result<FixedPoint, AlgebraError> {
    if a.labels != b.labels {
        return Err(a.mismatch(b.dim(), &b.labels));
    }
    let dim = a.dim();
    let mut x = FuzzyVector::zeros(a.labels.clone())?;
    for n in 0..=dim {
        let next = phi(a, b, &x)?;
        if next == x {
            return Ok(FixedPoint {
                solution: x,
                iterations: n,
            });
        }
        x = next;
    }
    // the chain stabilises within `dim` steps on a finite lattice of values
    unreachable!("fixed-point iteration did not stabilise within {dim} steps")
}
