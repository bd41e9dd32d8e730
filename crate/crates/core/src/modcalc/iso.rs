use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactlin::{Field, Matrix};

use super::hom::hom_module;
use super::homology::Engine;
use super::module::{FiniteModule, ModuleError};

/// Random trials before giving up on finding an invertible homomorphism.
pub const ISO_TRIALS: usize = 64;

/// Why two modules were judged non-isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonIsoReason {
    Dimension { left: usize, right: usize },
    MinimalGenerators { left: usize, right: usize },
    HomDimensions { forward: usize, backward: usize },
    /// No invertible element found. Unless `exhaustive`, the chance that an
    /// isomorphism exists anyway is at most `(dim / field_order)^trials`.
    NoInvertibleHom {
        trials: usize,
        exhaustive: bool,
        dim: usize,
        field_order: u64,
    },
}

#[derive(Clone, Debug)]
pub enum IsoOutcome<K: Field> {
    /// Carries an invertible R-linear map `M -> N`.
    Isomorphic(Matrix<K>),
    NotIsomorphic(NonIsoReason),
    Inconclusive(String),
}

impl<K: Field> IsoOutcome<K> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::NotIsomorphic(_))
    }
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, IsoOutcome::Inconclusive(_))
    }
}

fn combine<K: Field>(f: &K, maps: &[Matrix<K>], c: &[K::Elem], rows: usize, cols: usize) -> Matrix<K> {
    let mut out = Matrix::zeros(f, rows, cols);
    for (m, x) in maps.iter().zip(c) {
        if !f.is_zero(x) {
            out = out.add(&m.scale(x));
        }
    }
    out
}

impl<K: Field> Engine<K> {
    /// Decides whether `M ≅ N`: cheap invariants first, then a search for an
    /// invertible element of `Hom_R(M, N)`.
    pub fn is_isomorphic(&self, m: &FiniteModule<K>, n: &FiniteModule<K>) -> Result<IsoOutcome<K>, ModuleError> {
        if !m.same_algebra(n) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let f = m.field();
        if m.dim() != n.dim() {
            return Ok(IsoOutcome::NotIsomorphic(NonIsoReason::Dimension {
                left: m.dim(),
                right: n.dim(),
            }));
        }
        if m.actions() == n.actions() {
            return Ok(IsoOutcome::Isomorphic(Matrix::identity(f, m.dim())));
        }
        let (bm, bn) = (self.betti(m, 0)[0], self.betti(n, 0)[0]);
        if bm != bn {
            return Ok(IsoOutcome::NotIsomorphic(NonIsoReason::MinimalGenerators { left: bm, right: bn }));
        }
        // For graded modules the Hom basis spans every homogeneous degree, so
        // this is still all of Hom_R(M, N).
        let fwd = hom_module(m, n)?;
        let back = super::hom::hom_dim(n, m)?;
        if fwd.dim() != back {
            return Ok(IsoOutcome::NotIsomorphic(NonIsoReason::HomDimensions {
                forward: fwd.dim(),
                backward: back,
            }));
        }
        let dim = m.dim();
        let maps = fwd.maps();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed() ^ m.fingerprint().rotate_left(17) ^ n.fingerprint());
        for _ in 0..ISO_TRIALS {
            let c: Vec<K::Elem> = (0..maps.len()).map(|_| f.sample(&mut rng)).collect();
            let x = combine(f, maps, &c, dim, dim);
            if x.rank() == dim {
                return Ok(IsoOutcome::Isomorphic(x));
            }
        }
        let order = f.order();
        if let Some(p) = order {
            let total = (p as u128).checked_pow(maps.len() as u32);
            if maps.len() <= 4 && p <= 5 {
                let total = total.unwrap() as u64;
                for idx in 0..total {
                    let mut rest = idx;
                    let c: Vec<K::Elem> = (0..maps.len())
                        .map(|_| {
                            let v = f.nth(rest % p);
                            rest /= p;
                            v
                        })
                        .collect();
                    let x = combine(f, maps, &c, dim, dim);
                    if x.rank() == dim {
                        return Ok(IsoOutcome::Isomorphic(x));
                    }
                }
                return Ok(IsoOutcome::NotIsomorphic(NonIsoReason::NoInvertibleHom {
                    trials: total as usize,
                    exhaustive: true,
                    dim,
                    field_order: p,
                }));
            }
            if (dim as u64) < p {
                return Ok(IsoOutcome::NotIsomorphic(NonIsoReason::NoInvertibleHom {
                    trials: ISO_TRIALS,
                    exhaustive: false,
                    dim,
                    field_order: p,
                }));
            }
        }
        Ok(IsoOutcome::Inconclusive(format!(
            "invariants agree but {ISO_TRIALS} random homomorphisms were all singular"
        )))
    }
}

/// Isomorphism test with a fresh engine seeded by `seed`.
pub fn is_isomorphic<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>, seed: u64) -> Result<IsoOutcome<K>, ModuleError> {
    Engine::new(seed).is_isomorphic(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteLocalAlgebra;
    use crate::exactlin::{PrimeField, Rationals};
    use crate::modcalc::hom::is_homomorphism;
    use crate::modcalc::module::{matlis_dual, regular_module, residue_field_module};
    use crate::modcalc::tensor::tensor_module;
    use std::sync::Arc;

    #[test]
    fn basic_iso_outcomes() {
        let a = Arc::new(FiniteLocalAlgebra::trivial_extension(2, PrimeField::default()).unwrap());
        let e = Engine::new(7);
        let r = regular_module(&a);
        let k = residue_field_module(&a);
        let d = matlis_dual(&r);
        match e.is_isomorphic(&r, &r).unwrap() {
            IsoOutcome::Isomorphic(x) => assert!(x.is_identity()),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            e.is_isomorphic(&r, &k).unwrap(),
            IsoOutcome::NotIsomorphic(NonIsoReason::Dimension { .. })
        ));
        assert!(e.is_isomorphic(&r, &d).unwrap().is_not_isomorphic());
        let dd = matlis_dual(&d);
        let rd = tensor_module(&r, &d).unwrap();
        match e.is_isomorphic(&rd, &d).unwrap() {
            IsoOutcome::Isomorphic(x) => {
                assert!(is_homomorphism(&x, &rd, &d))
            }
            other => panic!("{other:?}"),
        }
        assert!(e.is_isomorphic(&dd, &r).unwrap().is_isomorphic());
    }

    #[test]
    fn gorenstein_dual_is_free() {
        let a = Arc::new(FiniteLocalAlgebra::trivial_extension(1, PrimeField::default()).unwrap());
        let r = regular_module(&a);
        let d = matlis_dual(&r);
        assert!(is_isomorphic(&d, &r, 0).unwrap().is_isomorphic());
    }

    #[test]
    fn small_fields_and_rationals() {
        let f = PrimeField::new(2).unwrap();
        let a = Arc::new(FiniteLocalAlgebra::trivial_extension(2, f).unwrap());
        let r = regular_module(&a);
        let d = matlis_dual(&r);
        assert!(is_isomorphic(&r, &d, 0).unwrap().is_not_isomorphic());
        let g = Arc::new(FiniteLocalAlgebra::trivial_extension(1, f).unwrap());
        let rg = regular_module(&g);
        assert!(is_isomorphic(&matlis_dual(&rg), &rg, 0).unwrap().is_isomorphic());
        let q = Arc::new(FiniteLocalAlgebra::trivial_extension(1, Rationals).unwrap());
        let rq = regular_module(&q);
        assert!(is_isomorphic(&matlis_dual(&rq), &rq, 3).unwrap().is_isomorphic());
    }
}
