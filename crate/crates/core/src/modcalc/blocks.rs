use std::collections::BTreeMap;

/// Partition of coordinates `0..n` into homogeneous degree blocks. Within a
/// block, coordinates keep their global order.
#[derive(Clone, Debug, Default)]
pub(crate) struct Blocks {
    by_degree: BTreeMap<i32, Vec<usize>>,
    degree_of: Vec<i32>,
    local: Vec<usize>,
}

impl Blocks {
    pub fn new(degrees: impl IntoIterator<Item = i32>) -> Self {
        let degree_of: Vec<i32> = degrees.into_iter().collect();
        let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        let mut local = vec![0; degree_of.len()];
        for (g, &d) in degree_of.iter().enumerate() {
            let b = by_degree.entry(d).or_default();
            local[g] = b.len();
            b.push(g);
        }
        Blocks {
            by_degree,
            degree_of,
            local,
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn block(&self, d: i32) -> &[usize] {
        self.by_degree.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn degree_of(&self, g: usize) -> i32 {
        self.degree_of[g]
    }

    pub fn local_index(&self, g: usize) -> usize {
        self.local[g]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_keep_global_order() {
        let b = Blocks::new([1, 0, 1, -1, 0]);
        assert_eq!(b.degrees().collect::<Vec<_>>(), vec![-1, 0, 1]);
        assert_eq!(b.block(0), &[1, 4]);
        assert_eq!(b.block(1), &[0, 2]);
        assert_eq!(b.local_index(4), 1);
        assert_eq!(b.degree_of(3), -1);
        assert!(b.block(7).is_empty());
    }
}
