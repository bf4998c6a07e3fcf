//! Named mode partitions.
//!
//! A partition is an ordered list of labelled subsystems, each holding a
//! positive number of bosonic modes. Mode `i` (0-based, global) occupies
//! quadrature rows `2i` (Q) and `2i+1` (P).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub modes: usize,
}

/// Ordered, labelled subsystems fixing the quadrature ordering
/// `(Q_1, P_1, Q_2, P_2, ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModePartition {
    subsystems: Vec<Subsystem>,
}

impl ModePartition {
    pub fn new(subsystems: impl IntoIterator<Item = (impl Into<String>, usize)>) -> Result<Self> {
        let subsystems: Vec<Subsystem> = subsystems
            .into_iter()
            .map(|(label, modes)| Subsystem { label: label.into(), modes })
            .collect();
        if subsystems.is_empty() {
            return Err(Error::structure("partition must have at least one subsystem"));
        }
        for s in &subsystems {
            if s.modes == 0 {
                return Err(Error::structure(format!(
                    "subsystem {:?} must have at least one mode",
                    s.label
                )));
            }
        }
        for (i, s) in subsystems.iter().enumerate() {
            if subsystems[..i].iter().any(|t| t.label == s.label) {
                return Err(Error::structure(format!("duplicate subsystem label {:?}", s.label)));
            }
        }
        Ok(Self { subsystems })
    }

    /// Single subsystem covering `modes` modes.
    pub fn single(label: impl Into<String>, modes: usize) -> Result<Self> {
        Self::new([(label.into(), modes)])
    }

    /// Two subsystems, the common bipartite layout.
    pub fn bipartite(a: impl Into<String>, ma: usize, b: impl Into<String>, mb: usize) -> Result<Self> {
        Self::new([(a.into(), ma), (b.into(), mb)])
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn total_modes(&self) -> usize {
        self.subsystems.iter().map(|s| s.modes).sum()
    }

    /// Quadrature dimension `2 * total_modes`.
    pub fn dim(&self) -> usize {
        2 * self.total_modes()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|s| s.label == label)
    }

    pub fn modes_of(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.modes)
            .ok_or_else(|| Error::structure(format!("unknown subsystem label {:?}", label)))
    }

    /// Global mode indices (0-based) of one subsystem, in order.
    pub fn mode_indices(&self, label: &str) -> Result<Vec<usize>> {
        let mut offset = 0;
        for s in &self.subsystems {
            if s.label == label {
                return Ok((offset..offset + s.modes).collect());
            }
            offset += s.modes;
        }
        Err(Error::structure(format!("unknown subsystem label {:?}", label)))
    }

    /// Global mode indices of a set of subsystems, in the partition's own
    /// subsystem order regardless of the order of `labels`.
    pub fn mode_indices_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        for l in labels {
            if !self.contains(l) {
                return Err(Error::structure(format!("unknown subsystem label {:?}", l)));
            }
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for s in &self.subsystems {
            if labels.contains(&s.label.as_str()) {
                out.extend(offset..offset + s.modes);
            }
            offset += s.modes;
        }
        Ok(out)
    }

    /// Quadrature row/column indices (pairs `2i, 2i+1`) for a set of labels.
    pub fn quadrature_indices_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let modes = self.mode_indices_of(labels)?;
        Ok(modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect())
    }

    /// Sub-partition keeping `labels`, preserving the original order.
    pub fn restriction(&self, labels: &[&str]) -> Result<ModePartition> {
        for l in labels {
            if !self.contains(l) {
                return Err(Error::structure(format!("unknown subsystem label {:?}", l)));
            }
        }
        let kept: Vec<Subsystem> = self
            .subsystems
            .iter()
            .filter(|s| labels.contains(&s.label.as_str()))
            .cloned()
            .collect();
        if kept.is_empty() {
            return Err(Error::structure("restriction must keep at least one subsystem"));
        }
        Ok(ModePartition { subsystems: kept })
    }

    /// Appends a fresh subsystem; fails if the label is taken.
    pub fn extended(&self, label: impl Into<String>, modes: usize) -> Result<ModePartition> {
        let label = label.into();
        if self.contains(&label) {
            return Err(Error::structure(format!("subsystem label {:?} already in use", label)));
        }
        if modes == 0 {
            return Err(Error::structure("subsystem must have at least one mode"));
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.push(Subsystem { label, modes });
        Ok(ModePartition { subsystems })
    }

    /// Checks that `a` and `b` are disjoint label sets known to this
    /// partition.
    pub fn check_disjoint(&self, a: &[&str], b: &[&str]) -> Result<()> {
        for l in a.iter().chain(b) {
            if !self.contains(l) {
                return Err(Error::structure(format!("unknown subsystem label {:?}", l)));
            }
        }
        for l in a {
            if b.contains(l) {
                return Err(Error::structure(format!("label {:?} appears on both sides", l)));
            }
        }
        Ok(())
    }
}
