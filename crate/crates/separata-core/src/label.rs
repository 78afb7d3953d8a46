//! Labels name worlds inside sequents: the distinguished constant `eps`
//! (the identity world) plus an unbounded supply of variables.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(u32);

impl Label {
    pub const EPSILON: Label = Label(0);

    pub fn var(id: u32) -> Label {
        debug_assert!(id > 0, "label variable ids start at 1");
        Label(id)
    }

    pub fn is_epsilon(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_epsilon() {
            f.write_str("eps")
        } else {
            write!(f, "a{}", self.0)
        }
    }
}

/// Parse the textual form produced by `Display` ("eps" or "aN").
pub fn parse_label(s: &str) -> Option<Label> {
    if s == "eps" {
        return Some(Label::EPSILON);
    }
    let n: u32 = s.strip_prefix('a')?.parse().ok()?;
    if n == 0 {
        None
    } else {
        Some(Label(n))
    }
}

/// Monotone supply of fresh label variables for one proof attempt.
/// A label handed out once is never reused, even after substitutions
/// eliminate it from every live sequent.
#[derive(Debug, Clone)]
pub struct LabelAllocator {
    next: u32,
}

impl LabelAllocator {
    pub fn new() -> Self {
        LabelAllocator { next: 1 }
    }

    pub fn fresh(&mut self) -> Label {
        let l = Label(self.next);
        self.next += 1;
        l
    }

    /// Number of variables handed out so far.
    pub fn allocated(&self) -> u32 {
        self.next - 1
    }
}

impl Default for LabelAllocator {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_labels_are_distinct_and_not_epsilon() {
        let mut alloc = LabelAllocator::new();
        let a = alloc.fresh();
        let b = alloc.fresh();
        assert_ne!(a, b);
        assert!(!a.is_epsilon());
        assert!(!b.is_epsilon());
    }

    #[test]
    fn label_text_round_trips() {
        let mut alloc = LabelAllocator::new();
        for _ in 0..5 {
            let l = alloc.fresh();
            assert_eq!(parse_label(&l.to_string()), Some(l));
        }
        assert_eq!(parse_label("eps"), Some(Label::EPSILON));
        assert_eq!(parse_label("b2"), None);
    }
}
