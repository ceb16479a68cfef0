//! Set partitions of `{0,…,n−1}` as restricted growth strings.

/// One partition, stored as block labels `labels[i]` with
/// `labels[0] = 0` and `labels[i] ≤ 1 + max(labels[..i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    labels: Vec<usize>,
    blocks: usize,
}

impl SetPartition {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.blocks];
        for &b in &self.labels {
            sizes[b] += 1;
        }
        sizes
    }

    /// `μ(0̂, π) = Π_B (−1)^{|B|−1} (|B|−1)!` in the partition lattice.
    pub fn mobius_weight(&self) -> i128 {
        self.block_sizes()
            .into_iter()
            .map(|size| {
                let fact: i128 = (1..size as i128).product();
                if size % 2 == 0 {
                    -fact
                } else {
                    fact
                }
            })
            .product()
    }
}

/// Iterator over all partitions of an `n`-element set, in lexicographic
/// order of their restricted growth strings.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    labels: Vec<usize>,
    /// `prefix_max[i] = max(labels[..=i])`.
    prefix_max: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            labels: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        }
    }

    fn advance(&mut self) {
        let n = self.labels.len();
        for i in (1..n).rev() {
            if self.labels[i] <= self.prefix_max[i - 1] {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let blocks = self.prefix_max.last().map_or(0, |&m| m + 1);
        let item = SetPartition {
            labels: self.labels.clone(),
            blocks,
        };
        if self.labels.is_empty() {
            self.done = true;
        } else {
            self.advance();
        }
        Some(item)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(SetPartitions::new(n).count(), b, "n = {n}");
        }
    }

    #[test]
    fn mobius_weights_sum_to_zero() {
        // Σ_π μ(0̂,π) = 0 for n ≥ 2
        for n in 2..7 {
            let s: i128 = SetPartitions::new(n).map(|p| p.mobius_weight()).sum();
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn single_block_weight() {
        let p = SetPartitions::new(4).last().unwrap();
        assert_eq!(p.block_count(), 4);
        let whole = SetPartitions::new(4).next().unwrap();
        assert_eq!(whole.block_sizes(), vec![4]);
        assert_eq!(whole.mobius_weight(), -6);
    }
}
