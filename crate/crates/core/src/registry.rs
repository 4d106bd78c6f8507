//! Named strategy registries. Each algorithm family sits behind a trait;
//! implementations register under a name and are picked at runtime.

use crate::construct::{self, RowConvention, SearchStrategy, ToeplitzSpec};
use crate::conv::{ConvCode, MdpMethod, PolyMatrix};
use crate::error::{Error, Result};
use crate::gamma::{self, IndependenceMethod};
use crate::matrix::RingMatrix;
use crate::ring::ChainRing;

pub struct Registry<T: ?Sized> {
    entries: Vec<(&'static str, Box<T>)>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry { entries: Vec::new() }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn register(&mut self, name: &'static str, item: Box<T>) {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, item));
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, b)| b.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(format!("'{name}' (known: {})", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}

pub trait MdpCriterion: Send + Sync {
    fn is_mdp(&self, code: &ConvCode, budget: u128) -> Result<bool>;
    fn is_reverse_mdp(&self, code: &ConvCode, budget: u128) -> Result<bool>;
}

struct ByMethod(MdpMethod);

impl MdpCriterion for ByMethod {
    fn is_mdp(&self, code: &ConvCode, budget: u128) -> Result<bool> {
        code.is_mdp(self.0, budget)
    }

    fn is_reverse_mdp(&self, code: &ConvCode, budget: u128) -> Result<bool> {
        code.is_reverse_mdp(self.0, budget)
    }
}

pub fn mdp_criteria() -> Registry<dyn MdpCriterion> {
    let mut r: Registry<dyn MdpCriterion> = Registry::default();
    r.register("distances", Box::new(ByMethod(MdpMethod::Distances)));
    r.register("minors", Box::new(ByMethod(MdpMethod::Minors)));
    r
}

pub trait IndependenceTest: Send + Sync {
    fn independent(&self, a: &RingMatrix, budget: u128) -> Result<bool>;
}

struct Independence(IndependenceMethod);

impl IndependenceTest for Independence {
    fn independent(&self, a: &RingMatrix, budget: u128) -> Result<bool> {
        gamma::is_gamma_linearly_independent(a, self.0, budget)
    }
}

pub fn independence_tests() -> Registry<dyn IndependenceTest> {
    let mut r: Registry<dyn IndependenceTest> = Registry::default();
    r.register("oracle", Box::new(Independence(IndependenceMethod::Oracle)));
    r.register("shapefast", Box::new(Independence(IndependenceMethod::ShapeFast)));
    r.register("auto", Box::new(Independence(IndependenceMethod::Auto)));
    r
}

/// Block extraction from a superregular Toeplitz matrix.
pub trait Extraction: Send + Sync {
    fn extract(&self, a: &ToeplitzSpec, n: usize, k: usize, l: usize) -> Result<PolyMatrix>;
}

struct Rows(RowConvention);

impl Extraction for Rows {
    fn extract(&self, a: &ToeplitzSpec, n: usize, k: usize, l: usize) -> Result<PolyMatrix> {
        construct::extract_mdp_blocks(a, n, k, l, self.0)
    }
}

pub fn extractions() -> Registry<dyn Extraction> {
    let mut r: Registry<dyn Extraction> = Registry::default();
    r.register("example", Box::new(Rows(RowConvention::Example)));
    r.register("formula", Box::new(Rows(RowConvention::Formula)));
    r
}

pub trait SuperregularSearch: Send + Sync {
    /// `seed` is required by randomized strategies.
    fn search(
        &self,
        ell: usize,
        ring: &ChainRing,
        seed: Option<u64>,
        budget: u128,
        require_reverse: bool,
    ) -> Result<Vec<ToeplitzSpec>>;

    fn randomized(&self) -> bool;
}

struct Exhaustive;

impl SuperregularSearch for Exhaustive {
    fn search(
        &self,
        ell: usize,
        ring: &ChainRing,
        _seed: Option<u64>,
        budget: u128,
        require_reverse: bool,
    ) -> Result<Vec<ToeplitzSpec>> {
        construct::search_superregular(ell, ring, SearchStrategy::Exhaustive { budget }, require_reverse)
    }

    fn randomized(&self) -> bool {
        false
    }
}

struct RandomDraws;

impl SuperregularSearch for RandomDraws {
    fn search(
        &self,
        ell: usize,
        ring: &ChainRing,
        seed: Option<u64>,
        budget: u128,
        require_reverse: bool,
    ) -> Result<Vec<ToeplitzSpec>> {
        let seed = seed.ok_or_else(|| Error::InvalidParams("random search needs a seed".into()))?;
        construct::search_superregular(ell, ring, SearchStrategy::Random { seed, budget }, require_reverse)
    }

    fn randomized(&self) -> bool {
        true
    }
}

pub fn superregular_searches() -> Registry<dyn SuperregularSearch> {
    let mut r: Registry<dyn SuperregularSearch> = Registry::default();
    r.register("exhaustive", Box::new(Exhaustive));
    r.register("random", Box::new(RandomDraws));
    r
}
