//! Canonical enumeration of valid finite models.
//!
//! Order: domain size ascending; then the denotation map, read as a
//! sequence over the names in signature order (first name most significant,
//! undenoting last); then the identity relation as a bitmask (bit `d*n+e`)
//! ascending; then the predicate extensions, each a bitmask over tuples in
//! lexicographic order, compared predicate by predicate in signature order.

use std::collections::BTreeMap;
use std::rc::Rc;

use super::{Bounds, SearchError, MAX_DOMAIN_SIZE, MAX_TUPLES};
use crate::semantics::{Extension, Model, Profile};
use crate::syntax::Signature;

/// All partial equivalence relations on `n` elements as ascending bitmasks.
pub(crate) fn partial_equivalences(n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for field in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&d| field & (1 << d) != 0).collect();
        // Restricted growth strings give each partition of `members` once.
        let mut block = vec![0usize; members.len()];
        loop {
            let mut mask = 0u64;
            for (i, &d) in members.iter().enumerate() {
                for (j, &e) in members.iter().enumerate() {
                    if block[i] == block[j] {
                        mask |= 1 << (d * n + e);
                    }
                }
            }
            out.push(mask);
            if !next_restricted_growth(&mut block) {
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

fn next_restricted_growth(block: &mut [usize]) -> bool {
    for i in (1..block.len()).rev() {
        let max_prefix = block[..i].iter().copied().max().unwrap_or(0);
        if block[i] <= max_prefix {
            block[i] += 1;
            for b in &mut block[i + 1..] {
                *b = 0;
            }
            return true;
        }
    }
    false
}

fn identity_pairs(mask: u64, n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n * n)
        .filter(move |bit| mask & (1 << bit) != 0)
        .map(move |bit| (bit / n, bit % n))
}

/// Tuple with lexicographic index `index` over `n` elements.
pub(crate) fn tuple_at(index: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    let mut rest = index;
    for slot in t.iter_mut().rev() {
        *slot = rest % n;
        rest /= n;
    }
    t
}

/// Extension masks compatible with the identity relation `per`: unions of
/// congruence orbits, avoiding null elements when `strict`. Ascending.
fn congruent_extensions(per: u64, n: usize, arity: usize, strict: bool) -> Vec<u64> {
    let in_field = |d: usize| (0..n).any(|e| per & (1 << (d * n + e)) != 0);
    let class = |d: usize| {
        (0..n)
            .find(|&e| per & (1 << (d * n + e)) != 0)
            .unwrap_or(d)
    };
    let count = n.pow(arity as u32);
    let mut orbits: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for index in 0..count {
        let t = tuple_at(index, n, arity);
        if strict && t.iter().any(|&d| !in_field(d)) {
            continue;
        }
        let key: Vec<usize> = t.iter().map(|&d| class(d)).collect();
        *orbits.entry(key).or_default() |= 1 << index;
    }
    let orbits: Vec<u64> = orbits.into_values().collect();
    let mut out: Vec<u64> = (0u64..(1 << orbits.len()))
        .map(|pick| {
            orbits
                .iter()
                .enumerate()
                .filter(|(i, _)| pick & (1 << i) != 0)
                .fold(0, |acc, (_, o)| acc | o)
        })
        .collect();
    out.sort_unstable();
    out
}

struct SizeState {
    n: usize,
    denotations: Vec<Vec<Option<usize>>>,
    pers: Vec<u64>,
    /// `extensions[per][pred]`
    extensions: Vec<Vec<Rc<Vec<u64>>>>,
    den: usize,
    per: usize,
    ext: Vec<usize>,
}

impl SizeState {
    fn new(n: usize, names: usize, arities: &[usize], profile: Profile) -> Self {
        let strict = matches!(profile, Profile::NullStrict | Profile::NullPadded);
        let mut values: Vec<Option<usize>> = (0..n).map(Some).collect();
        if profile == Profile::Partial {
            values.push(None);
        }
        let mut denotations = vec![Vec::new()];
        for _ in 0..names {
            denotations = denotations
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut d = prefix.clone();
                        d.push(*v);
                        d
                    })
                })
                .collect();
        }
        let pers = partial_equivalences(n);
        let mut cache: BTreeMap<(u64, usize), Rc<Vec<u64>>> = BTreeMap::new();
        let extensions = pers
            .iter()
            .map(|&per| {
                arities
                    .iter()
                    .map(|&arity| {
                        cache
                            .entry((per, arity))
                            .or_insert_with(|| Rc::new(congruent_extensions(per, n, arity, strict)))
                            .clone()
                    })
                    .collect()
            })
            .collect();
        SizeState {
            n,
            denotations,
            pers,
            extensions,
            den: 0,
            per: 0,
            ext: vec![0; arities.len()],
        }
    }

    fn is_empty(&self) -> bool {
        self.denotations.is_empty() || self.pers.is_empty()
    }

    fn advance(&mut self) -> bool {
        for i in (0..self.ext.len()).rev() {
            self.ext[i] += 1;
            if self.ext[i] < self.extensions[self.per][i].len() {
                return true;
            }
            self.ext[i] = 0;
        }
        self.per += 1;
        if self.per < self.pers.len() {
            return true;
        }
        self.per = 0;
        self.den += 1;
        self.den < self.denotations.len()
    }
}

/// Lazy iterator over the models of a signature in canonical order.
pub struct Models {
    names: Vec<String>,
    predicates: Vec<(String, usize)>,
    profile: Profile,
    next_size: usize,
    max_size: usize,
    state: Option<SizeState>,
}

impl Models {
    fn current(&self) -> Model {
        let s = self.state.as_ref().expect("current called with a size in progress");
        let mut m = Model::new(s.n);
        for (name, d) in self.names.iter().zip(&s.denotations[s.den]) {
            m.names.insert(name.clone(), *d);
        }
        m.identity.extend(identity_pairs(s.pers[s.per], s.n));
        for (i, (symbol, arity)) in self.predicates.iter().enumerate() {
            let mask = s.extensions[s.per][i][s.ext[i]];
            let tuples = (0..s.n.pow(*arity as u32))
                .filter(|bit| mask & (1 << bit) != 0)
                .map(|bit| tuple_at(bit, s.n, *arity));
            m.predicates
                .insert(symbol.clone(), Extension::with_tuples(*arity, tuples));
        }
        m
    }

    fn start_next_size(&mut self) -> bool {
        while self.next_size <= self.max_size {
            let n = self.next_size;
            self.next_size += 1;
            let arities: Vec<usize> = self.predicates.iter().map(|(_, a)| *a).collect();
            let state = SizeState::new(n, self.names.len(), &arities, self.profile);
            if !state.is_empty() {
                self.state = Some(state);
                return true;
            }
        }
        self.state = None;
        false
    }
}

impl Iterator for Models {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.state.is_none() && !self.start_next_size() {
            return None;
        }
        let model = self.current();
        let more = self.state.as_mut().is_some_and(SizeState::advance);
        if !more {
            self.state = None;
            if !self.start_next_size() {
                self.next_size = self.max_size + 1;
            }
        }
        Some(model)
    }
}

/// Every model over `sig` valid under `profile`, sizes up to the bound.
/// Size 0 is included only under the partial profile.
pub fn enumerate_models(
    sig: &Signature,
    bounds: &Bounds,
    profile: Profile,
) -> Result<Models, SearchError> {
    let max = bounds.max_domain_size;
    if max > MAX_DOMAIN_SIZE {
        return Err(SearchError::Bounds {
            requested: max,
            limit: MAX_DOMAIN_SIZE,
        });
    }
    for (symbol, arity) in &sig.predicates {
        let tuples = max.pow(*arity as u32);
        if tuples > MAX_TUPLES {
            return Err(SearchError::TooManyTuples {
                symbol: symbol.clone(),
                arity: *arity,
                size: max,
                tuples,
            });
        }
    }
    let mut models = Models {
        names: sig.names.iter().cloned().collect(),
        predicates: sig.predicates.iter().cloned().collect(),
        profile,
        next_size: if profile == Profile::Partial { 0 } else { 1 },
        max_size: max,
        state: None,
    };
    models.start_next_size();
    Ok(models)
}
