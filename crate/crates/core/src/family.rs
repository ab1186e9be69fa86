//! Families of subsets of a labelled ground set.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::system::{check_labels, DimSet};

/// A collection of subsets of `ground`, each stored as a bitmask over ground
/// positions. Sets are kept sorted by `(popcount, value)` and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    ground: Arc<[String]>,
    sets: Vec<u32>,
}

fn canonical_order(sets: &mut Vec<u32>) {
    sets.sort_unstable_by_key(|&m| (m.count_ones(), m));
    sets.dedup();
}

impl Family {
    pub fn new<S: Into<String>>(
        ground: impl IntoIterator<Item = S>,
        sets: impl IntoIterator<Item = u32>,
    ) -> Result<Family> {
        let ground: Vec<String> = ground.into_iter().map(Into::into).collect();
        check_labels(&ground)?;
        if ground.len() > 31 {
            return Err(Error::Capacity(format!("ground set of {} labels", ground.len())));
        }
        let limit = 1u64 << ground.len();
        let sets: Vec<u32> = sets.into_iter().collect();
        if let Some(bad) = sets.iter().find(|&&m| m as u64 >= limit) {
            return Err(Error::InvalidInput(format!(
                "set mask {bad:#b} uses bits beyond a ground of {}",
                ground.len()
            )));
        }
        Ok(Family::from_masks_unchecked(ground.into(), sets))
    }

    /// Sets given by their labels, e.g. `&[&[], &["x"], &["x", "y"]]`.
    pub fn from_labels<S: AsRef<str>>(ground: &[S], sets: &[&[&str]]) -> Result<Family> {
        let ground: Vec<String> = ground.iter().map(|s| s.as_ref().to_string()).collect();
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            let mut m = 0u32;
            for l in set.iter() {
                let i = ground
                    .iter()
                    .position(|g| g == l)
                    .ok_or_else(|| Error::UnknownDim(l.to_string()))?;
                m |= 1 << i;
            }
            masks.push(m);
        }
        Family::new(ground, masks)
    }

    pub(crate) fn from_masks_unchecked(ground: Arc<[String]>, mut sets: Vec<u32>) -> Family {
        canonical_order(&mut sets);
        Family { ground, sets }
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: DimSet) -> bool {
        self.sets
            .binary_search_by_key(&(set.0.count_ones(), set.0), |&m| (m.count_ones(), m))
            .is_ok()
    }

    pub fn sets(&self) -> impl Iterator<Item = DimSet> + '_ {
        self.sets.iter().map(|&m| DimSet(m))
    }

    /// Largest member cardinality, or `None` for the empty family.
    pub fn max_size(&self) -> Option<usize> {
        self.sets.last().map(|m| m.count_ones() as usize)
    }

    pub fn labels_of(&self, set: DimSet) -> Vec<&str> {
        set.iter().map(|i| self.ground[i].as_str()).collect()
    }

    pub fn is_downward_closed(&self) -> bool {
        self.sets.iter().all(|&m| {
            DimSet(m)
                .iter()
                .all(|i| self.contains(DimSet(m & !(1 << i))))
        })
    }

    fn same_ground(&self, other: &Family) -> Result<()> {
        if self.ground[..] == other.ground[..] {
            Ok(())
        } else {
            Err(Error::DimMismatch(format!(
                "family grounds [{}] vs [{}]",
                self.ground.join(" "),
                other.ground.join(" ")
            )))
        }
    }

    pub fn is_subfamily(&self, other: &Family) -> Result<bool> {
        self.same_ground(other)?;
        Ok(self.sets().all(|s| other.contains(s)))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.same_ground(other)?;
        let sets = self.sets.iter().chain(&other.sets).copied().collect();
        Ok(Family::from_masks_unchecked(self.ground.clone(), sets))
    }

    pub fn intersection(&self, other: &Family) -> Result<Family> {
        self.same_ground(other)?;
        let sets = self
            .sets
            .iter()
            .copied()
            .filter(|&m| other.contains(DimSet(m)))
            .collect();
        Ok(Family::from_masks_unchecked(self.ground.clone(), sets))
    }

    /// The same sets expressed over a permutation of the ground labels.
    pub fn reorder(&self, ground: &[String]) -> Result<Family> {
        if ground.len() != self.ground.len() {
            return Err(Error::DimMismatch("ground sizes differ".into()));
        }
        let mut map = Vec::with_capacity(self.ground.len());
        for g in self.ground.iter() {
            map.push(
                ground
                    .iter()
                    .position(|h| h == g)
                    .ok_or_else(|| Error::UnknownDim(g.clone()))?,
            );
        }
        let sets = self
            .sets
            .iter()
            .map(|&m| DimSet(m).iter().fold(0u32, |acc, i| acc | 1 << map[i]))
            .collect();
        Ok(Family::from_masks_unchecked(ground.to_vec().into(), sets))
    }

    /// Equality as families of label sets, ignoring the order of the ground.
    pub fn same_sets(&self, other: &Family) -> bool {
        other
            .reorder(&self.ground)
            .map(|o| o.sets == self.sets)
            .unwrap_or(false)
    }

    /// One line per set: labels joined by `,`, the empty set as `-`.
    pub fn render_sets(&self) -> Vec<String> {
        self.sets()
            .map(|s| {
                if s.is_empty() {
                    "-".to_string()
                } else {
                    self.labels_of(s).join(",")
                }
            })
            .collect()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for line in self.render_sets() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family[{}]{{{}}}", self.ground.join(","), self.render_sets().join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_ordering_is_by_size_then_value() {
        let f = Family::new(["a", "b", "c"], [0b111, 0b100, 0, 0b011, 0b001, 0b001]).unwrap();
        assert_eq!(f.render_sets(), vec!["-", "a", "c", "a,b", "a,b,c"]);
        assert_eq!(f.len(), 5);
        assert_eq!(f.serialize(), "-\na\nc\na,b\na,b,c\n");
    }

    #[test]
    fn rejects_out_of_range_masks() {
        assert!(Family::new(["a"], [0b10]).is_err());
    }

    #[test]
    fn reorder_and_same_sets() {
        let f = Family::from_labels(&["x", "y"], &[&[], &["x"], &["x", "y"]]).unwrap();
        let g = f.reorder(&["y".to_string(), "x".to_string()]).unwrap();
        assert_ne!(f, g);
        assert!(f.same_sets(&g));
        assert!(g.contains(DimSet(0b10)));
    }

    #[test]
    fn downward_closure() {
        let ok = Family::from_labels(&["x", "y"], &[&[], &["x"], &["y"]]).unwrap();
        let bad = Family::from_labels(&["x", "y"], &[&[], &["x", "y"]]).unwrap();
        assert!(ok.is_downward_closed());
        assert!(!bad.is_downward_closed());
        assert!(Family::new(["x"], []).unwrap().is_downward_closed());
    }
}
