//! Canonical unordered pairs.

/// An unordered pair of distinct elements, stored in sorted order so that
/// `Pair::new(a, b) == Pair::new(b, a)` and pairs can key ordered maps.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pair<T: Ord>(T, T);

impl<T: Ord> Pair<T> {
    /// Canonicalizes `(a, b)`. Panics when `a == b`: self-pairs are
    /// excluded throughout the school network.
    pub fn new(a: T, b: T) -> Self {
        Self::try_new(a, b).expect("self-pair")
    }

    /// Canonicalizes `(a, b)`, or `None` when `a == b`.
    pub fn try_new(a: T, b: T) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Pair(a, b)),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(Pair(b, a)),
        }
    }

    pub fn first(&self) -> &T {
        &self.0
    }

    pub fn second(&self) -> &T {
        &self.1
    }

    pub fn into_inner(self) -> (T, T) {
        (self.0, self.1)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.0 == *x || self.1 == *x
    }
}

impl<T: Ord + Clone> Pair<T> {
    pub fn cloned(a: &T, b: &T) -> Self {
        Self::new(a.clone(), b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_is_canonical() {
        assert_eq!(Pair::new(3, 1), Pair::new(1, 3));
        assert_eq!(Pair::new("B", "A").first(), &"A");
    }

    #[test]
    fn self_pair_rejected() {
        assert_eq!(Pair::try_new(2, 2), None);
    }
}
