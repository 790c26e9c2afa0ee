#![allow(dead_code)]

use std::collections::HashMap;

use oblivious_mimo::schemes::{evaluate, Capacity, LinkBudget, Scheme, SchemeRate};
use oblivious_mimo::ChannelSpec;
use rayon::prelude::*;

pub const ALPHA2: [f64; 4] = [0.0, 0.3, 0.6, 0.9];
pub const POWER: [f64; 5] = [0.1, 1.0, 10.0, 100.0, 1000.0];
pub const LINKS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, f64::INFINITY];

pub fn cap(x: f64) -> Capacity {
    Capacity::new(x).unwrap()
}

pub fn spec(alpha2: f64) -> ChannelSpec {
    ChannelSpec::from_alpha2(alpha2).unwrap()
}

pub fn budget(p: f64, c: f64, cprime: f64) -> LinkBudget {
    LinkBudget::new(p, cap(c), cap(cprime)).unwrap()
}

/// Grid point indices into ALPHA2, POWER, LINKS (C), LINKS (C').
pub type Key = (usize, usize, usize, usize);

pub struct GridRates {
    pub rates: HashMap<(Key, Scheme), SchemeRate>,
}

impl GridRates {
    pub fn get(&self, key: Key, scheme: Scheme) -> Option<&SchemeRate> {
        self.rates.get(&(key, scheme))
    }

    pub fn keys() -> Vec<Key> {
        let mut out = Vec::new();
        for a in 0..ALPHA2.len() {
            for p in 0..POWER.len() {
                for c in 0..LINKS.len() {
                    for cp in 0..LINKS.len() {
                        out.push((a, p, c, cp));
                    }
                }
            }
        }
        out
    }
}

pub fn budget_at(key: Key) -> LinkBudget {
    budget(POWER[key.1], LINKS[key.2], LINKS[key.3])
}

/// Every applicable scheme at every grid point.
pub fn evaluate_grid() -> GridRates {
    let rates = GridRates::keys()
        .par_iter()
        .flat_map_iter(|&key| {
            let s = spec(ALPHA2[key.0]);
            let b = budget_at(key);
            Scheme::ALL
                .into_iter()
                .filter(move |sc| sc.applies_to(&b))
                .map(move |sc| {
                    let r = evaluate(sc, s, &b).unwrap_or_else(|e| panic!("{sc} at {key:?}: {e}"));
                    ((key, sc), r)
                })
        })
        .collect();
    GridRates { rates }
}
