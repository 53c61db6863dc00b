use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

/// Assignment of items to communities `0..community_count`, each non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    assignments: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Validates that labels are dense: every label below the maximum is used.
    pub fn new(assignments: Vec<usize>) -> Result<Self> {
        let community_count = assignments.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; community_count];
        for &a in &assignments {
            used[a] = true;
        }
        if let Some(empty) = used.iter().position(|u| !u) {
            return Err(Error::InvalidArgument(format!(
                "community {empty} is empty"
            )));
        }
        Ok(Self {
            assignments,
            community_count,
        })
    }

    /// Relabels arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels<T: Hash + Eq>(labels: &[T]) -> Self {
        let mut ids: HashMap<&T, usize> = HashMap::new();
        let assignments: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Self {
            community_count: ids.len(),
            assignments,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignments: (0..n).collect(),
            community_count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Self {
            assignments: vec![0; n],
            community_count: usize::from(n > 0),
        }
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }
}
