//! Commutative local algebras given by structure constants.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactlin::{Echelon, Field, FieldError, FieldSpec, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure constant array has {found} entries, expected dim^3 = {expected}")]
    Shape { expected: usize, found: usize },
    #[error("dimension must be positive")]
    ZeroDim,
    #[error("multiplication is not commutative at (e{0}, e{1})")]
    NotCommutative(usize, usize),
    #[error("multiplication is not associative at (e{0}, e{1}, e{2})")]
    NotAssociative(usize, usize, usize),
    #[error("e0 is not a two-sided identity")]
    BadIdentity,
    #[error("product e{0}*e{1} of radical elements has a unit component")]
    NotLocal(usize, usize),
    #[error("the span of e1..e{0} is not nilpotent")]
    NotNilpotent(usize),
    #[error("grading is inconsistent: {0}")]
    BadGrading(String),
    #[error("trivial extension needs a >= 1; use base_field for the field itself")]
    ZeroExponent,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("labels list has {found} entries, expected {expected}")]
    Labels { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A commutative finite-dimensional local algebra with basis `e0 = 1, e1, ...`,
/// where `e1..` span the maximal ideal.
#[derive(Clone, Debug)]
pub struct FiniteLocalAlgebra<K: Field> {
    field: K,
    dim: usize,
    mult: Vec<K::Elem>,
    labels: Option<Vec<String>>,
    degrees: Option<Vec<u32>>,
    left: Vec<Matrix<K>>,
    terms: Vec<Vec<(usize, K::Elem)>>,
    generators: Vec<usize>,
    nilpotency: usize,
}

impl<K: Field> PartialEq for FiniteLocalAlgebra<K> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.mult == other.mult
            && self.degrees == other.degrees
    }
}

impl<K: Field> FiniteLocalAlgebra<K> {
    /// Builds and validates an algebra from structure constants
    /// `mult[(i * dim + j) * dim + k] = c[i][j][k]`.
    pub fn from_parts(
        field: K,
        dim: usize,
        mult: Vec<K::Elem>,
        labels: Option<Vec<String>>,
        degrees: Option<Vec<u32>>,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDim);
        }
        if mult.len() != dim * dim * dim {
            return Err(AlgebraError::Shape {
                expected: dim * dim * dim,
                found: mult.len(),
            });
        }
        if let Some(l) = &labels {
            if l.len() != dim {
                return Err(AlgebraError::Labels {
                    expected: dim,
                    found: l.len(),
                });
            }
        }
        let terms: Vec<Vec<(usize, K::Elem)>> = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter(|&k| !field.is_zero(&mult[ij * dim + k]))
                    .map(|k| (k, mult[ij * dim + k].clone()))
                    .collect()
            })
            .collect();
        let left = (0..dim)
            .map(|i| Matrix::from_fn(&field, dim, dim, |k, j| mult[(i * dim + j) * dim + k].clone()))
            .collect();
        let mut alg = FiniteLocalAlgebra {
            field,
            dim,
            mult,
            labels,
            degrees,
            left,
            terms,
            generators: Vec::new(),
            nilpotency: 0,
        };
        alg.check_axioms()?;
        alg.nilpotency = alg.compute_nilpotency()?;
        alg.generators = alg.compute_generators();
        Ok(alg)
    }

    /// The field itself as a one-dimensional algebra.
    pub fn base_field(field: K) -> Self {
        let one = field.one();
        Self::from_parts(field, 1, vec![one], Some(vec!["1".into()]), Some(vec![0]))
            .expect("the base field is a valid algebra")
    }

    /// `F ⋉ F^a`: basis `1, x1..xa` with all products of the `xi` zero.
    pub fn trivial_extension(a: usize, field: K) -> Result<Self, AlgebraError> {
        if a == 0 {
            return Err(AlgebraError::ZeroExponent);
        }
        let dim = a + 1;
        let mut mult = vec![field.zero(); dim * dim * dim];
        for i in 0..dim {
            mult[i * dim + i] = field.one();
            mult[(i * dim) * dim + i] = field.one();
        }
        let mut labels = vec!["1".to_string()];
        labels.extend((1..=a).map(|i| format!("x{i}")));
        let mut degrees = vec![0];
        degrees.extend(std::iter::repeat(1).take(a));
        Self::from_parts(field, dim, mult, Some(labels), Some(degrees))
    }

    /// `A ⊗_F B` with basis `e_i ⊗ f_j` at index `i * dim(B) + j`.
    pub fn tensor_algebra(a: &Self, b: &Self) -> Result<Self, AlgebraError> {
        if a.field != b.field {
            return Err(AlgebraError::FieldMismatch(a.field.spec(), b.field.spec()));
        }
        let f = &a.field;
        let (da, db) = (a.dim, b.dim);
        let dim = da * db;
        let mut mult = vec![f.zero(); dim * dim * dim];
        for i in 0..da {
            for i2 in 0..da {
                for (k, ca) in &a.terms[i * da + i2] {
                    for j in 0..db {
                        for j2 in 0..db {
                            for (l, cb) in &b.terms[j * db + j2] {
                                let x = i * db + j;
                                let y = i2 * db + j2;
                                let z = k * db + l;
                                mult[(x * dim + y) * dim + z] = f.mul(ca, cb);
                            }
                        }
                    }
                }
            }
        }
        let la = a.labels_or_default();
        let lb = b.labels_or_default();
        let mut labels = Vec::with_capacity(dim);
        for x in &la {
            for y in &lb {
                labels.push(match (x.as_str(), y.as_str()) {
                    ("1", _) => y.clone(),
                    (_, "1") => x.clone(),
                    _ => format!("{x}*{y}"),
                });
            }
        }
        let degrees = match (&a.degrees, &b.degrees) {
            (Some(ga), Some(gb)) => Some(ga.iter().flat_map(|x| gb.iter().map(move |y| x + y)).collect()),
            _ => None,
        };
        Self::from_parts(f.clone(), dim, mult, Some(labels), degrees)
    }

    fn labels_or_default(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => (0..self.dim)
                .map(|i| if i == 0 { "1".to_string() } else { format!("e{i}") })
                .collect(),
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
    pub fn degrees(&self) -> Option<&[u32]> {
        self.degrees.as_deref()
    }
    pub fn is_graded(&self) -> bool {
        self.degrees.is_some()
    }
    pub fn degree(&self, i: usize) -> u32 {
        self.degrees.as_ref().map_or(0, |d| d[i])
    }
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &K::Elem {
        &self.mult[(i * self.dim + j) * self.dim + k]
    }
    pub fn mult_data(&self) -> &[K::Elem] {
        &self.mult
    }

    /// Nonzero `(k, c[i][j][k])` pairs of `e_i * e_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, K::Elem)] {
        &self.terms[i * self.dim + j]
    }

    /// Matrix of multiplication by `e_i` in the column convention.
    pub fn left_mult(&self, i: usize) -> &Matrix<K> {
        &self.left[i]
    }

    /// Basis indices whose classes form a basis of m/m^2.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul_elems(&self, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let xy = f.mul(x, y);
                for (k, c) in self.product_terms(i, j) {
                    out[*k] = f.add(&out[*k], &f.mul(&xy, c));
                }
            }
        }
        out
    }

    /// Re-runs every structural check; constructors already call this.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        self.check_axioms()?;
        self.compute_nilpotency().map(|_| ())
    }

    fn check_axioms(&self) -> Result<(), AlgebraError> {
        let f = &self.field;
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { f.one() } else { f.zero() };
                if *self.coeff(0, i, j) != want || *self.coeff(i, 0, j) != want {
                    return Err(AlgebraError::BadIdentity);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if (0..n).any(|k| self.coeff(i, j, k) != self.coeff(j, i, k)) {
                    return Err(AlgebraError::NotCommutative(i, j));
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                if !f.is_zero(self.coeff(i, j, 0)) {
                    return Err(AlgebraError::NotLocal(i, j));
                }
            }
        }
        // (e_i e_j) e_l against e_i (e_j e_l), via the left multiplication matrices.
        for i in 0..n {
            for j in 0..n {
                let lhs = self.product_terms(i, j).iter().fold(Matrix::zeros(f, n, n), |acc, (k, c)| {
                    acc.add(&self.left[*k].scale(c))
                });
                let rhs = self.left[i].mul(&self.left[j]);
                if lhs != rhs {
                    let l = (0..n).find(|&l| lhs.col(l) != rhs.col(l)).unwrap_or(0);
                    return Err(AlgebraError::NotAssociative(i, j, l));
                }
            }
        }
        if let Some(deg) = &self.degrees {
            if deg.len() != n {
                return Err(AlgebraError::BadGrading(format!("{} degrees for dimension {n}", deg.len())));
            }
            if deg[0] != 0 || deg[1..].iter().any(|&d| d == 0) {
                return Err(AlgebraError::BadGrading(
                    "identity must have degree 0 and radical elements positive degree".into(),
                ));
            }
            for i in 0..n {
                for j in 0..n {
                    for (k, _) in self.product_terms(i, j) {
                        if deg[*k] != deg[i] + deg[j] {
                            return Err(AlgebraError::BadGrading(format!("e{i}*e{j} is not homogeneous")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Dimensions of m, m^2, ... down to zero.
    fn power_dims(&self) -> Result<Vec<usize>, AlgebraError> {
        let f = &self.field;
        let n = self.dim;
        let mut basis: Vec<Vec<K::Elem>> = (1..n)
            .map(|i| {
                let mut v = vec![f.zero(); n];
                v[i] = f.one();
                v
            })
            .collect();
        let mut dims = vec![basis.len()];
        while !basis.is_empty() {
            let mut ech = Echelon::new(f.clone(), n);
            let mut next = Vec::new();
            for i in 1..n {
                for v in &basis {
                    let w = self.left[i].mul_vec(v);
                    if ech.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            if next.len() >= basis.len() {
                return Err(AlgebraError::NotNilpotent(n - 1));
            }
            dims.push(next.len());
            basis = next;
        }
        Ok(dims)
    }

    fn compute_nilpotency(&self) -> Result<usize, AlgebraError> {
        let dims = self.power_dims()?;
        // dims[j] = dim m^(j+1); the index is the first power that vanishes.
        Ok(dims.iter().position(|&d| d == 0).unwrap() + 1)
    }

    fn compute_generators(&self) -> Vec<usize> {
        let f = &self.field;
        let n = self.dim;
        let mut ech = Echelon::new(f.clone(), n);
        for i in 1..n {
            for j in 1..n {
                let mut v = vec![f.zero(); n];
                for (k, c) in self.product_terms(i, j) {
                    v[*k] = c.clone();
                }
                ech.insert(v);
            }
        }
        let mut gens = Vec::new();
        for i in 1..n {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            if ech.insert(v) {
                gens.push(i);
            }
        }
        gens
    }

    /// `min { l > 0 : m^l = 0 }`.
    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency
    }

    /// Dimension of the socle `ann(m)`.
    pub fn type_of(&self) -> usize {
        let f = &self.field;
        let n = self.dim;
        if self.generators.is_empty() {
            return n;
        }
        let mut stacked = Matrix::zeros(f, 0, n);
        for &g in &self.generators {
            stacked = stacked.vstack(&self.left[g]);
        }
        n - stacked.rank()
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim;
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.field.render(self.coeff(i, j, k))).collect())
                    .collect()
            })
            .collect();
        AlgebraJson {
            field: self.field.spec(),
            dim: n,
            mult,
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
        }
    }

    pub fn from_json(field: K, json: &AlgebraJson) -> Result<Self, AlgebraError> {
        if json.field != field.spec() {
            return Err(AlgebraError::FieldMismatch(json.field, field.spec()));
        }
        let n = json.dim;
        let mut mult = Vec::with_capacity(n * n * n);
        let found: usize = json.mult.iter().flatten().map(|v| v.len()).sum();
        if json.mult.len() != n || json.mult.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(AlgebraError::Shape {
                expected: n * n * n,
                found,
            });
        }
        for v in json.mult.iter().flatten().flatten() {
            mult.push(field.parse(v)?);
        }
        Self::from_parts(field, n, mult, json.labels.clone(), json.degrees.clone())
    }

    /// SHA-256 of the canonical JSON encoding, as lowercase hex.
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.to_json()).expect("algebra serializes");
        hex_digest(&bytes)
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// On-disk form of an algebra. Field elements are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldSpec,
    pub dim: usize,
    pub mult: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};

    fn gf() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn trivial_extension_shapes() {
        let a = FiniteLocalAlgebra::trivial_extension(2, gf()).unwrap();
        assert_eq!((a.dim(), a.nilpotency_index(), a.type_of()), (3, 2, 2));
        let b = FiniteLocalAlgebra::trivial_extension(1, gf()).unwrap();
        assert_eq!((b.dim(), b.type_of()), (2, 1));
        let c = FiniteLocalAlgebra::trivial_extension(3, gf()).unwrap();
        assert_eq!((c.dim(), c.type_of()), (4, 3));
        assert_eq!(
            FiniteLocalAlgebra::trivial_extension(0, gf()).unwrap_err(),
            AlgebraError::ZeroExponent
        );
    }

    #[test]
    fn base_field_invariants() {
        let k = FiniteLocalAlgebra::base_field(gf());
        assert_eq!((k.dim(), k.nilpotency_index(), k.type_of()), (1, 1, 1));
        assert!(k.generators().is_empty());
    }

    #[test]
    fn tensor_products() {
        let a = FiniteLocalAlgebra::trivial_extension(2, gf()).unwrap();
        let b = FiniteLocalAlgebra::trivial_extension(3, gf()).unwrap();
        let s = FiniteLocalAlgebra::tensor_algebra(&a, &b).unwrap();
        assert_eq!((s.dim(), s.nilpotency_index(), s.type_of()), (12, 3, 6));
        assert_eq!(s.generators().len(), 5);
        let aa = FiniteLocalAlgebra::tensor_algebra(&a, &a).unwrap();
        assert_eq!(aa.nilpotency_index(), 3);
        let k = FiniteLocalAlgebra::base_field(gf());
        let ak = FiniteLocalAlgebra::tensor_algebra(&a, &k).unwrap();
        assert_eq!(ak, a);
        let q = FiniteLocalAlgebra::trivial_extension(2, Rationals).unwrap();
        assert_eq!(q.type_of(), 2);
    }

    #[test]
    fn validation_rejects_broken_constants() {
        let a = FiniteLocalAlgebra::trivial_extension(2, gf()).unwrap();
        let mut mult = a.mult_data().to_vec();
        // x1*x2 = x1 but x2*x1 = 0
        mult[(3 + 2) * 3 + 1] = 1;
        let err = FiniteLocalAlgebra::from_parts(gf(), 3, mult, None, None).unwrap_err();
        assert_eq!(err, AlgebraError::NotCommutative(1, 2));

        let mut mult = a.mult_data().to_vec();
        mult[(3 + 1) * 3] = 1;
        let err = FiniteLocalAlgebra::from_parts(gf(), 3, mult, None, None).unwrap_err();
        assert_eq!(err, AlgebraError::NotLocal(1, 1));

        // x1^2 = x1 is idempotent, not nilpotent, but caught earlier as a
        // non-homogeneous product when degrees are given.
        let mut mult = a.mult_data().to_vec();
        mult[(3 + 1) * 3 + 1] = 1;
        let err = FiniteLocalAlgebra::from_parts(gf(), 3, mult.clone(), None, None).unwrap_err();
        assert_eq!(err, AlgebraError::NotNilpotent(2));
        let err = FiniteLocalAlgebra::from_parts(gf(), 3, mult, None, Some(vec![0, 1, 1])).unwrap_err();
        assert!(matches!(err, AlgebraError::BadGrading(_)));
    }

    #[test]
    fn json_round_trip() {
        let a = FiniteLocalAlgebra::trivial_extension(2, gf()).unwrap();
        let s = FiniteLocalAlgebra::tensor_algebra(&a, &a).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let back: AlgebraJson = serde_json::from_str(&json).unwrap();
        let t = FiniteLocalAlgebra::from_json(gf(), &back).unwrap();
        assert_eq!(s, t);
        assert_eq!(s.content_hash(), t.content_hash());
    }
}
