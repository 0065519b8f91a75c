//! Instances, bags and bag collections.
//!
//! Bags hold [`InstanceId`]s into a shared [`InstanceTable`] rather than
//! copies of coordinates, so unions and duplicated bags are cheap and every
//! collection derived from the same data agrees on what an instance is.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{bail, Error, Result};

/// Tolerance on `Σ w_j = 1` for weighted collections.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Aggregation rule of a bag's label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Label proportions: the aggregate label is the number of positives.
    Llp,
    /// Multiple instance: the aggregate label is the OR of instance labels.
    Mil,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Llp => "llp",
            Mode::Mil => "mil",
        })
    }
}

/// Index of an instance inside its [`InstanceTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceId(pub usize);

impl InstanceId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Borrowed view of one instance.
#[derive(Debug, Clone, Copy)]
pub struct FeatureVector<'a> {
    pub id: InstanceId,
    pub coords: &'a [f64],
    pub label: Option<bool>,
}

/// Row store of feature vectors sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceTable {
    dim: usize,
    coords: Vec<f64>,
    labels: Vec<Option<bool>>,
}

impl InstanceTable {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coords: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, rows: usize) -> Self {
        Self {
            dim,
            coords: Vec::with_capacity(dim * rows),
            labels: Vec::with_capacity(rows),
        }
    }

    /// Appends a row and returns its id. Rejects wrong dimensions and
    /// non-finite coordinates.
    pub fn push(&mut self, coords: &[f64], label: Option<bool>) -> Result<InstanceId> {
        if coords.len() != self.dim {
            bail!(
                Data,
                "instance has dimension {}, table expects {}",
                coords.len(),
                self.dim
            );
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            bail!(Data, "non-finite coordinate {c}");
        }
        let id = InstanceId(self.labels.len());
        self.coords.extend_from_slice(coords);
        self.labels.push(label);
        Ok(id)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn contains(&self, id: InstanceId) -> bool {
        id.0 < self.len()
    }

    pub fn get(&self, id: InstanceId) -> Option<FeatureVector<'_>> {
        self.contains(id).then(|| FeatureVector {
            id,
            coords: self.coords(id),
            label: self.labels[id.0],
        })
    }

    /// Coordinates of `id`. Panics if the id is out of range.
    #[inline]
    pub fn coords(&self, id: InstanceId) -> &[f64] {
        &self.coords[id.0 * self.dim..(id.0 + 1) * self.dim]
    }

    #[inline]
    pub fn label(&self, id: InstanceId) -> Option<bool> {
        self.labels.get(id.0).copied().flatten()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = FeatureVector<'_>> + '_ {
        (0..self.len()).map(move |i| FeatureVector {
            id: InstanceId(i),
            coords: self.coords(InstanceId(i)),
            label: self.labels[i],
        })
    }

    /// Copy of the table with every ground-truth label removed.
    pub fn without_labels(&self) -> Self {
        Self {
            dim: self.dim,
            coords: self.coords.clone(),
            labels: alloc::vec![None; self.labels.len()],
        }
    }

    /// New table holding the listed rows, renumbered from zero.
    pub fn select(&self, ids: &[InstanceId]) -> Self {
        let mut out = Self::with_capacity(self.dim, ids.len());
        for &id in ids {
            out.coords.extend_from_slice(self.coords(id));
            out.labels.push(self.labels[id.0]);
        }
        out
    }
}

/// A multiset of instances with one aggregate label.
#[derive(Debug, Clone, PartialEq)]
pub struct Bag {
    members: Vec<InstanceId>,
    label: u32,
    mode: Mode,
    provenance: Option<Vec<usize>>,
}

impl Bag {
    /// A small bag. Members must be non-empty; the label must be at most the
    /// bag size (LLP) or 0/1 (MIL).
    pub fn new(mode: Mode, members: Vec<InstanceId>, label: u32) -> Result<Self> {
        if members.is_empty() {
            bail!(Data, "bag has no members");
        }
        Self::checked(mode, members, label, None)
    }

    /// An LLP union of source bags. Unlike [`Bag::new`] the member list may
    /// be empty (every source dropped), in which case the label is 0.
    pub fn union(members: Vec<InstanceId>, label: u32, provenance: Vec<usize>) -> Result<Self> {
        Self::checked(Mode::Llp, members, label, Some(provenance))
    }

    fn checked(mode: Mode, members: Vec<InstanceId>, label: u32, provenance: Option<Vec<usize>>) -> Result<Self> {
        match mode {
            Mode::Llp if label as usize > members.len() => {
                bail!(Data, "LLP label {label} exceeds bag size {}", members.len())
            }
            Mode::Mil if label > 1 => bail!(Data, "MIL label must be 0 or 1, got {label}"),
            Mode::Mil if members.is_empty() => bail!(Data, "MIL bag has no members"),
            _ => {}
        }
        Ok(Self {
            members,
            label,
            mode,
            provenance,
        })
    }

    #[inline]
    pub fn members(&self) -> &[InstanceId] {
        &self.members
    }

    /// Aggregate label σ.
    #[inline]
    pub fn label(&self) -> u32 {
        self.label
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Source-bag indices for union bags.
    pub fn provenance(&self) -> Option<&[usize]> {
        self.provenance.as_deref()
    }
}

/// Bags over a shared instance table, optionally weighted.
#[derive(Debug, Clone, PartialEq)]
pub struct BagCollection {
    mode: Mode,
    table: Arc<InstanceTable>,
    bags: Vec<Bag>,
    weights: Option<Vec<f64>>,
}

impl BagCollection {
    /// Validates member ids, bag modes and (when present) that the weights
    /// are non-negative and sum to one within [`WEIGHT_TOLERANCE`].
    pub fn new(mode: Mode, table: Arc<InstanceTable>, bags: Vec<Bag>, weights: Option<Vec<f64>>) -> Result<Self> {
        for (j, bag) in bags.iter().enumerate() {
            if bag.mode != mode {
                bail!(Data, "bag {j} has mode {}, collection is {mode}", bag.mode);
            }
            if let Some(id) = bag.members.iter().find(|id| !table.contains(**id)) {
                bail!(Data, "bag {j} references instance {id}, table has {} rows", table.len());
            }
        }
        if let Some(w) = &weights {
            check_weights(w, bags.len())?;
        }
        Ok(Self {
            mode,
            table,
            bags,
            weights,
        })
    }

    pub fn unweighted(mode: Mode, table: Arc<InstanceTable>, bags: Vec<Bag>) -> Result<Self> {
        Self::new(mode, table, bags, None)
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    #[inline]
    pub fn table(&self) -> &InstanceTable {
        &self.table
    }

    #[inline]
    pub fn shared_table(&self) -> &Arc<InstanceTable> {
        &self.table
    }

    #[inline]
    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    #[inline]
    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Weight of bag `j`; `1/m` for unweighted collections.
    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        match &self.weights {
            Some(w) => w[j],
            None => 1.0 / self.bags.len() as f64,
        }
    }

    /// Same bags under a new weight vector.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights, self.bags.len())?;
        Ok(Self {
            weights: Some(weights),
            ..self.clone()
        })
    }

    /// Same bags with the weights dropped.
    pub fn without_weights(&self) -> Self {
        Self {
            weights: None,
            ..self.clone()
        }
    }

    /// `k`, the largest bag size.
    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(Bag::len).max().unwrap_or(0)
    }

    /// Sorted distinct instance ids used by at least one bag.
    pub fn distinct_instances(&self) -> Vec<InstanceId> {
        let mut seen = alloc::vec![false; self.table.len()];
        for bag in &self.bags {
            for id in &bag.members {
                seen[id.0] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(InstanceId(i)))
            .collect()
    }
}

fn check_weights(w: &[f64], m: usize) -> Result<()> {
    if w.len() != m {
        bail!(Data, "{} weights for {m} bags", w.len());
    }
    if let Some(x) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
        bail!(Data, "invalid bag weight {x}");
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > WEIGHT_TOLERANCE {
        return Err(Error::Data(alloc::format!("bag weights sum to {total}, expected 1")));
    }
    Ok(())
}
