use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteLocalAlgebra;
use crate::exactlin::{Field, FieldError, Matrix};

use super::blocks::Blocks;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("expected {expected} action matrices of size {dim}x{dim}")]
    Shape { expected: usize, dim: usize },
    #[error("the identity of the algebra does not act as the identity")]
    NotUnital,
    #[error("action does not respect the product e{0}*e{1}")]
    NotRepresentation(usize, usize),
    #[error("grading is inconsistent: {0}")]
    BadGrading(String),
    #[error("module references algebra {found} but {expected} was supplied")]
    AlgebraRef { expected: String, found: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A finite module over a [`FiniteLocalAlgebra`], given by one action matrix
/// per algebra basis element (column convention: `e_i . x = action[i] * x`).
#[derive(Clone, Debug)]
pub struct FiniteModule<K: Field> {
    algebra: Arc<FiniteLocalAlgebra<K>>,
    dim: usize,
    action: Vec<Matrix<K>>,
    degrees: Option<Vec<i32>>,
    label: Option<String>,
}

impl<K: Field> PartialEq for FiniteModule<K> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.dim == other.dim
            && self.action == other.action
            && self.degrees == other.degrees
    }
}

pub(crate) fn same_algebra<K: Field>(a: &Arc<FiniteLocalAlgebra<K>>, b: &Arc<FiniteLocalAlgebra<K>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<K: Field> FiniteModule<K> {
    pub fn from_parts(
        algebra: Arc<FiniteLocalAlgebra<K>>,
        dim: usize,
        action: Vec<Matrix<K>>,
        degrees: Option<Vec<i32>>,
        label: Option<String>,
    ) -> Result<Self, ModuleError> {
        let shape_err = ModuleError::Shape {
            expected: algebra.dim(),
            dim,
        };
        if action.len() != algebra.dim() || action.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(shape_err);
        }
        if let Some(d) = &degrees {
            if d.len() != dim {
                return Err(ModuleError::BadGrading(format!("{} degrees for dimension {dim}", d.len())));
            }
        }
        let m = FiniteModule {
            algebra,
            dim,
            action,
            degrees,
            label,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds without validation; callers guarantee the axioms.
    pub(crate) fn from_parts_unchecked(
        algebra: Arc<FiniteLocalAlgebra<K>>,
        dim: usize,
        action: Vec<Matrix<K>>,
        degrees: Option<Vec<i32>>,
        label: Option<String>,
    ) -> Self {
        let m = FiniteModule {
            algebra,
            dim,
            action,
            degrees,
            label,
        };
        debug_assert_eq!(m.validate(), Ok(()));
        m
    }

    pub fn validate(&self) -> Result<(), ModuleError> {
        let alg = &self.algebra;
        let f = alg.field();
        let n = alg.dim();
        if !self.action[0].is_identity() {
            return Err(ModuleError::NotUnital);
        }
        for i in 1..n {
            for j in i..n {
                let lhs = self.action[i].mul(&self.action[j]);
                let rhs = alg
                    .product_terms(i, j)
                    .iter()
                    .fold(Matrix::zeros(f, self.dim, self.dim), |acc, (k, c)| {
                        acc.add(&self.action[*k].scale(c))
                    });
                if lhs != rhs || self.action[j].mul(&self.action[i]) != lhs {
                    return Err(ModuleError::NotRepresentation(i, j));
                }
            }
        }
        if let (Some(deg), true) = (&self.degrees, alg.is_graded()) {
            for s in 0..n {
                let ds = alg.degree(s) as i32;
                let a = &self.action[s];
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        if !f.is_zero(a.get(r, c)) && deg[r] != deg[c] + ds {
                            return Err(ModuleError::BadGrading(format!("action of e{s} is not homogeneous")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The algebra acting on itself by multiplication.
    pub fn regular(algebra: &Arc<FiniteLocalAlgebra<K>>) -> Self {
        let n = algebra.dim();
        let action = (0..n).map(|i| algebra.left_mult(i).clone()).collect();
        let degrees = algebra.degrees().map(|d| d.iter().map(|&x| x as i32).collect());
        Self::from_parts_unchecked(algebra.clone(), n, action, degrees, Some("R".into()))
    }

    /// The residue field `k = A/m`.
    pub fn residue_field(algebra: &Arc<FiniteLocalAlgebra<K>>) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim())
            .map(|i| {
                if i == 0 {
                    Matrix::identity(f, 1)
                } else {
                    Matrix::zeros(f, 1, 1)
                }
            })
            .collect();
        let degrees = algebra.is_graded().then(|| vec![0]);
        Self::from_parts_unchecked(algebra.clone(), 1, action, degrees, Some("k".into()))
    }

    /// `R^rank`, all generators in degree 0.
    pub fn free(algebra: &Arc<FiniteLocalAlgebra<K>>, rank: usize) -> Self {
        let r = Self::regular(algebra);
        let mut m = Self::zero(algebra);
        for _ in 0..rank {
            m = m.direct_sum(&r).expect("same algebra");
        }
        m.with_label(format!("R^{rank}"))
    }

    pub fn zero(algebra: &Arc<FiniteLocalAlgebra<K>>) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        let degrees = algebra.is_graded().then(Vec::new);
        Self::from_parts_unchecked(algebra.clone(), 0, action, degrees, Some("0".into()))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, ModuleError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let f = self.algebra.field();
        let n = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(f, n, n);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        m.set(r, c, a.get(r, c).clone());
                    }
                }
                for r in 0..other.dim {
                    for c in 0..other.dim {
                        m.set(self.dim + r, self.dim + c, b.get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        let degrees = match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(Self::from_parts_unchecked(self.algebra.clone(), n, action, degrees, None))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Drops the grading; every later computation then runs ungraded.
    pub fn forget_grading(mut self) -> Self {
        self.degrees = None;
        self
    }

    /// Shifts every degree by `s`.
    pub fn shift(mut self, s: i32) -> Self {
        if let Some(d) = &mut self.degrees {
            for x in d {
                *x += s;
            }
        }
        self
    }

    pub fn algebra(&self) -> &Arc<FiniteLocalAlgebra<K>> {
        &self.algebra
    }
    pub fn field(&self) -> &K {
        self.algebra.field()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn action(&self, i: usize) -> &Matrix<K> {
        &self.action[i]
    }
    pub fn actions(&self) -> &[Matrix<K>] {
        &self.action
    }
    pub fn degrees(&self) -> Option<&[i32]> {
        self.degrees.as_deref()
    }
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// True when both the algebra and the module carry gradings.
    pub fn is_graded(&self) -> bool {
        self.algebra.is_graded() && self.degrees.is_some()
    }

    pub(crate) fn blocks(&self) -> Blocks {
        if self.is_graded() {
            Blocks::new(self.degrees.clone().unwrap())
        } else {
            Blocks::new(std::iter::repeat(0).take(self.dim))
        }
    }

    pub(crate) fn same_algebra(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
    }

    /// Reattaches the module to an equal algebra instance.
    pub fn rebase(mut self, algebra: &Arc<FiniteLocalAlgebra<K>>) -> Result<Self, ModuleError> {
        if !same_algebra(&self.algebra, algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        self.algebra = algebra.clone();
        Ok(self)
    }

    /// Structural hash; equal modules hash equally.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dim.hash(&mut h);
        self.algebra.dim().hash(&mut h);
        for a in &self.action {
            a.data().hash(&mut h);
        }
        self.degrees.hash(&mut h);
        h.finish()
    }

    pub fn to_json(&self, algebra_ref: &str) -> ModuleJson {
        let f = self.field();
        let action = self
            .action
            .iter()
            .map(|a| {
                (0..a.rows())
                    .map(|r| a.row(r).iter().map(|x| f.render(x)).collect())
                    .collect()
            })
            .collect();
        ModuleJson {
            algebra_ref: algebra_ref.to_string(),
            dim: self.dim,
            action,
            label: self.label.clone(),
            degrees: self.degrees.clone(),
        }
    }

    pub fn from_json(algebra: &Arc<FiniteLocalAlgebra<K>>, json: &ModuleJson) -> Result<Self, ModuleError> {
        let expected = algebra.content_hash();
        if json.algebra_ref != expected {
            return Err(ModuleError::AlgebraRef {
                expected,
                found: json.algebra_ref.clone(),
            });
        }
        let f = algebra.field();
        let n = json.dim;
        let shape_err = ModuleError::Shape {
            expected: algebra.dim(),
            dim: n,
        };
        if json.action.len() != algebra.dim() {
            return Err(shape_err);
        }
        let mut action = Vec::with_capacity(json.action.len());
        for a in &json.action {
            if a.len() != n || a.iter().any(|r| r.len() != n) {
                return Err(shape_err);
            }
            let mut data = Vec::with_capacity(n * n);
            for x in a.iter().flatten() {
                data.push(f.parse(x)?);
            }
            action.push(Matrix::from_vec(f, n, n, data));
        }
        Self::from_parts(algebra.clone(), n, action, json.degrees.clone(), json.label.clone())
    }
}

/// On-disk form of a module; `algebra_ref` is the SHA-256 of the algebra's
/// canonical JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra_ref: String,
    pub dim: usize,
    pub action: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i32>>,
}

/// `Hom_F(M, F)` with transposed action and negated degrees.
pub fn matlis_dual<K: Field>(m: &FiniteModule<K>) -> FiniteModule<K> {
    let action = m.action.iter().map(|a| a.transpose()).collect();
    let degrees = m.degrees.as_ref().map(|d| d.iter().map(|x| -x).collect());
    let label = m.label.as_ref().map(|l| format!("{l}^v"));
    FiniteModule::from_parts_unchecked(m.algebra.clone(), m.dim, action, degrees, label)
}

pub fn regular_module<K: Field>(algebra: &Arc<FiniteLocalAlgebra<K>>) -> FiniteModule<K> {
    FiniteModule::regular(algebra)
}

pub fn residue_field_module<K: Field>(algebra: &Arc<FiniteLocalAlgebra<K>>) -> FiniteModule<K> {
    FiniteModule::residue_field(algebra)
}
