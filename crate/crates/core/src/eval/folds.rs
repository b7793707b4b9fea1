//! Cross-validation fold assignment.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hash::Fnv1a;
use crate::{Error, Result, SequenceSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FoldPolicy {
    RandomKFold,
    GroupKFold,
    LeaveOneGroupOut,
    FixedFromManifest,
}

/// Which fold each sample id is held out in.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FoldSpec {
    pub name: String,
    pub policy: FoldPolicy,
    pub folds: usize,
    pub assignment: BTreeMap<String, usize>,
}

/// Samples without a group form a group of their own, keyed by id.
pub fn group_key(sample: &SequenceSample) -> &str {
    sample.group().unwrap_or(sample.id())
}

fn unique_ids(dataset: &[SequenceSample]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for s in dataset {
        if !seen.insert(s.id()) {
            return Err(Error::InvalidFolds(alloc::format!("duplicate sample id `{}`", s.id())));
        }
    }
    Ok(())
}

fn check_k(k: usize, units: usize, what: &str) -> Result<()> {
    if k < 2 || k > units {
        return Err(Error::InvalidFolds(alloc::format!("need 2 <= k <= {units} {what}, got k = {k}")));
    }
    Ok(())
}

/// Deterministic fold assignment.
///
/// `RandomKFold` shuffles samples with `ChaCha8Rng(seed)` and deals them
/// round-robin. `GroupKFold` orders groups by an FNV-1a hash of the seed and
/// group id and deals whole groups round-robin. `LeaveOneGroupOut` gives every
/// group (sorted by id) its own fold and ignores `k` and `seed`.
pub fn make_folds(dataset: &[SequenceSample], policy: FoldPolicy, k: usize, seed: u64) -> Result<FoldSpec> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    unique_ids(dataset)?;
    let mut assignment = BTreeMap::new();
    let (name, folds) = match policy {
        FoldPolicy::RandomKFold => {
            check_k(k, dataset.len(), "samples")?;
            let mut order: Vec<usize> = (0..dataset.len()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for (pos, &i) in order.iter().enumerate() {
                assignment.insert(String::from(dataset[i].id()), pos % k);
            }
            (alloc::format!("random:{k}:seed={seed}"), k)
        }
        FoldPolicy::GroupKFold => {
            let groups: BTreeSet<&str> = dataset.iter().map(group_key).collect();
            check_k(k, groups.len(), "groups")?;
            let mut keyed: Vec<(u64, &str)> = groups
                .into_iter()
                .map(|g| {
                    let mut h = Fnv1a::new();
                    h.write(&seed.to_le_bytes()).write(g.as_bytes());
                    (h.finish(), g)
                })
                .collect();
            keyed.sort();
            let fold_of: BTreeMap<&str, usize> = keyed.iter().enumerate().map(|(j, &(_, g))| (g, j % k)).collect();
            for s in dataset {
                assignment.insert(String::from(s.id()), fold_of[group_key(s)]);
            }
            (alloc::format!("group:{k}:seed={seed}"), k)
        }
        FoldPolicy::LeaveOneGroupOut => {
            let groups: BTreeSet<&str> = dataset.iter().map(group_key).collect();
            if groups.len() < 2 {
                return Err(Error::InvalidFolds("leave-one-group-out needs at least two groups".into()));
            }
            let fold_of: BTreeMap<&str, usize> = groups.iter().enumerate().map(|(j, &g)| (g, j)).collect();
            for s in dataset {
                assignment.insert(String::from(s.id()), fold_of[group_key(s)]);
            }
            (String::from("logo"), fold_of.len())
        }
        FoldPolicy::FixedFromManifest => {
            return Err(Error::InvalidFolds("fixed folds come from FoldSpec::fixed".into()));
        }
    };
    Ok(FoldSpec { name, policy, folds, assignment })
}

impl FoldSpec {
    /// Folds given explicitly per sample, in dataset order. Fold indices must
    /// cover `0..K` with no gaps, `K >= 2`.
    pub fn fixed(dataset: &[SequenceSample], folds: &[Option<usize>]) -> Result<FoldSpec> {
        if dataset.len() != folds.len() {
            return Err(Error::InvalidFolds("one fold index per sample required".into()));
        }
        unique_ids(dataset)?;
        let mut assignment = BTreeMap::new();
        for (s, f) in dataset.iter().zip(folds) {
            let f = f.ok_or_else(|| Error::InvalidFolds(alloc::format!("sample `{}` has no fold index", s.id())))?;
            assignment.insert(String::from(s.id()), f);
        }
        let used: BTreeSet<usize> = assignment.values().copied().collect();
        let count = used.len();
        if count < 2 || used.iter().next_back() != Some(&(count - 1)) {
            return Err(Error::InvalidFolds("fold indices must be 0..K with K >= 2 and none empty".into()));
        }
        Ok(FoldSpec { name: String::from("manifest"), policy: FoldPolicy::FixedFromManifest, folds: count, assignment })
    }

    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignment.get(id).copied()
    }

    /// `(train, test)` dataset indices for held-out fold `fold`.
    pub fn split(&self, dataset: &[SequenceSample], fold: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, s) in dataset.iter().enumerate() {
            match self.fold_of(s.id()) {
                Some(f) if f == fold => test.push(i),
                Some(_) => train.push(i),
                None => {
                    return Err(Error::InvalidFolds(alloc::format!("sample `{}` has no fold", s.id())));
                }
            }
        }
        Ok((train, test))
    }

    /// True when no group has samples in more than one fold.
    pub fn respects_groups(&self, dataset: &[SequenceSample]) -> bool {
        let mut fold_of_group: BTreeMap<&str, usize> = BTreeMap::new();
        dataset.iter().all(|s| match self.fold_of(s.id()) {
            Some(f) => *fold_of_group.entry(group_key(s)).or_insert(f) == f,
            None => false,
        })
    }
}
