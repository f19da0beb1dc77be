//! Outcome of a single exact identity check.

use crate::OpMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// First mismatch on failure, or a short note (e.g. that both sides were
    /// identically zero) on success.
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            detail: Some(detail.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.detail = Some(note.into());
        self
    }

    /// Exact operator equality; on mismatch the first differing entry is
    /// reported. Equal sides that are both zero are flagged as trivial.
    pub fn matrices(name: impl Into<String>, lhs: &OpMatrix, rhs: &OpMatrix) -> Self {
        match lhs.first_mismatch(rhs) {
            None if lhs.is_zero() => Check::pass(name).with_note("trivial: both sides vanish"),
            None => Check::pass(name),
            Some((usize::MAX, ..)) => Check::fail(
                name,
                format!(
                    "shape {}x{} vs {}x{}",
                    lhs.rows(),
                    lhs.cols(),
                    rhs.rows(),
                    rhs.cols()
                ),
            ),
            Some((r, c, a, b)) => Check::fail(name, format!("entry ({r},{c}): lhs {a} != rhs {b}")),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.pass
            && self
                .detail
                .as_deref()
                .is_some_and(|d| d.starts_with("trivial"))
    }
}
