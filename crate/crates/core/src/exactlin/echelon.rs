use super::field::{Field, Pivot};

/// An incrementally grown row echelon basis of a subspace of `K^width`.
///
/// Rows are kept normalized (leading entry one) and sorted by pivot column,
/// but are not back-substituted until [`Echelon::into_reduced`] is called.
#[derive(Clone, Debug)]
pub struct Echelon<K: Field> {
    field: K,
    width: usize,
    pivots: Vec<Pivot<K::Elem>>,
}

impl<K: Field> Echelon<K> {
    pub fn new(field: K, width: usize) -> Self {
        Echelon {
            field,
            width,
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[Pivot<K::Elem>] {
        &self.pivots
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p.col).collect()
    }

    /// Reduces `v` in place against the current basis.
    pub fn reduce(&self, v: &mut [K::Elem]) {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        self.field.reduce(v, &self.pivots);
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the basis; returns false when it was already in the span.
    pub fn insert(&mut self, mut v: Vec<K::Elem>) -> bool {
        self.reduce(&mut v);
        self.insert_reduced(v)
    }

    /// Adds an already reduced vector; returns false if it is zero.
    pub fn insert_reduced(&mut self, mut v: Vec<K::Elem>) -> bool {
        let f = &self.field;
        let Some(col) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let end = v.iter().rposition(|x| !f.is_zero(x)).unwrap() + 1;
        let inv = f.inv(&v[col]).expect("nonzero leading entry");
        if !f.is_one(&inv) {
            for x in &mut v[col..end] {
                *x = f.mul(x, &inv);
            }
        }
        let pos = self.pivots.partition_point(|p| p.col < col);
        self.pivots.insert(pos, Pivot { col, end, row: v });
        true
    }

    /// Back-substitutes so that every pivot column is zero in all other rows.
    pub fn into_reduced(mut self) -> Vec<Pivot<K::Elem>> {
        let f = self.field.clone();
        for idx in (0..self.pivots.len()).rev() {
            let (head, tail) = self.pivots.split_at_mut(idx + 1);
            let p = &mut head[idx];
            f.reduce(&mut p.row, tail);
            p.end = p.row.iter().rposition(|x| !f.is_zero(x)).unwrap() + 1;
        }
        self.pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::PrimeField;

    #[test]
    fn insert_detects_dependence() {
        let f = PrimeField::new(7).unwrap();
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![0, 1, 1]));
        assert!(!e.insert(vec![1, 3, 4]));
        assert!(!e.insert(vec![0, 0, 0]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[2, 4, 6]));
        assert!(!e.contains(&[0, 0, 1]));
    }

    #[test]
    fn reduced_rows_are_clean() {
        let f = PrimeField::new(101).unwrap();
        let mut e = Echelon::new(f, 3);
        e.insert(vec![1, 1, 1]);
        e.insert(vec![0, 1, 2]);
        let rows = e.into_reduced();
        assert_eq!(rows[0].row, vec![1, 0, 100]);
        assert_eq!(rows[1].row, vec![0, 1, 2]);
    }
}
