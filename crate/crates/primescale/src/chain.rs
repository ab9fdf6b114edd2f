use std::fmt;
use std::sync::Arc;

/// Shared predicate over integers (level 0) or pattern values (level >= 1).
pub type Predicate = Arc<dyn Fn(u64) -> bool + Send + Sync>;

/// A family of indicator functions defining one multi-scale property:
/// a base predicate on positive integers plus one pattern predicate per
/// level transition.
///
/// Level transitions without an explicit predicate fall back to
/// non-nullity (`v != 0`), i.e. "some flagged sub-block exists".
#[derive(Clone)]
pub struct PropertyChain {
    name: String,
    base: Predicate,
    filters: Vec<Predicate>,
}

impl PropertyChain {
    pub fn new(name: impl Into<String>, base: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            base: Arc::new(base),
            filters: Vec::new(),
        }
    }

    /// Appends the pattern predicate for the next level transition
    /// (the first call supplies the level-1 -> level-2 filter, and so on).
    pub fn with_filter(mut self, filter: impl Fn(u64) -> bool + Send + Sync + 'static) -> Self {
        self.filters.push(Arc::new(filter));
        self
    }

    /// Property tag; used as the container label when persisted.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Base predicate on integers.
    pub fn base_holds(&self, n: u64) -> bool {
        (self.base)(n)
    }

    /// Pattern predicate applied when aggregating level `k` into level
    /// `k + 1` (k >= 1). Defaults to `v != 0` beyond the supplied filters.
    pub fn filter_holds(&self, k: u32, value: u64) -> bool {
        assert!(k >= 1, "pattern filters start at level 1");
        match self.filters.get((k - 1) as usize) {
            Some(f) => f(value),
            None => value != 0,
        }
    }

}

impl fmt::Debug for PropertyChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PropertyChain")
            .field("name", &self.name)
            .field("filters", &self.filters.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_filter_is_non_nullity() {
        let chain = PropertyChain::new("even", |n| n % 2 == 0);
        assert!(chain.base_holds(4));
        assert!(!chain.base_holds(5));
        assert!(chain.filter_holds(1, 7));
        assert!(!chain.filter_holds(1, 0));
        assert!(chain.filter_holds(9, 255));
    }

    #[test]
    fn explicit_filters_apply_in_order() {
        let chain = PropertyChain::new("demo", |_| true)
            .with_filter(|v| v == 1)
            .with_filter(|v| v > 10);
        assert!(chain.filter_holds(1, 1));
        assert!(!chain.filter_holds(1, 11));
        assert!(chain.filter_holds(2, 11));
        // beyond the supplied filters: non-nullity again
        assert!(chain.filter_holds(3, 2));
        assert!(!chain.filter_holds(3, 0));
    }
}
