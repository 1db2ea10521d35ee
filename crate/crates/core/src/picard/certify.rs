use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::word::check_assertions;
use super::{overt_step, DivisorClass, PicLattice, PicardError};
use crate::curve::OmegaJson;

pub const ORIENTATION: &str = "D = σ'_{p_m}∘…∘σ'_{p_1}(L); L-coefficient = deg(σ_{p_m}∘…∘σ_{p_1}) = deg of its inverse";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: Vec<usize>,
    pub prefix: usize,
    pub assertion: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub config_hash: String,
    pub generators: Vec<usize>,
    pub omega: Vec<OmegaJson>,
    pub succ: Vec<[usize; 2]>,
    pub max_len: usize,
    /// Reduced words of length exactly `max_len`; each is checked on every prefix.
    pub words_checked: u64,
    /// Distinct reduced words of length `1..=max_len`.
    pub words_total: u64,
    pub max_coeff_bits: u64,
    pub degree_symmetry: bool,
    pub status: String,
    pub orientation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

struct Shard {
    leaves: u64,
    total: u64,
    bits: u64,
    degrees: Vec<(Vec<usize>, BigInt)>,
    failure: Option<Counterexample>,
}

fn run_shard(lat: &PicLattice, first: usize, max_len: usize) -> Result<Shard, PicardError> {
    let gens = lat.marked().generators();
    let mut shard = Shard {
        leaves: 0,
        total: 0,
        bits: 0,
        degrees: Vec::new(),
        failure: None,
    };
    // Depth-first, lexicographic in generator order.
    let mut stack: Vec<(Vec<usize>, DivisorClass)> = vec![(vec![], lat.line())];
    let mut pending_first = Some(first);
    while let Some((word, d)) = stack.pop() {
        let choices: Vec<usize> = match pending_first.take() {
            Some(f) => vec![f],
            None => gens.iter().rev().copied().filter(|&g| word.last() != Some(&g)).collect(),
        };
        for p in choices {
            let next = overt_step(lat, &d, p)?.0;
            let mut w = word.clone();
            w.push(p);
            let report = check_assertions(lat, &next, Some(p), w.len());
            shard.total += 1;
            shard.bits = shard.bits.max(next.max_abs_bits());
            shard.degrees.push((w.clone(), next.m.clone()));
            if let Some(f) = report.first_failure() {
                shard.failure = Some(Counterexample {
                    prefix: w.len(),
                    word: w,
                    assertion: f.assertion.name().into(),
                    detail: f.counterexample.clone().unwrap_or_default(),
                });
                return Ok(shard);
            }
            if w.len() == max_len {
                shard.leaves += 1;
            } else {
                stack.push((w, next));
            }
        }
    }
    Ok(shard)
}

/// Checks every reduced word of length `1..=max_len`, sharded by first letter.
pub fn certify_free_product(lat: &PicLattice, max_len: usize) -> Result<Certificate, PicardError> {
    let ms = lat.marked();
    if max_len == 0 || ms.generators().is_empty() {
        return Err(PicardError::EmptyCertificate);
    }
    let shards: Vec<Shard> = ms
        .generators()
        .par_iter()
        .map(|&g| run_shard(lat, g, max_len))
        .collect::<Result<_, _>>()?;
    let failure = shards.iter().find_map(|s| s.failure.clone());
    let degrees: HashMap<&[usize], &BigInt> = shards
        .iter()
        .flat_map(|s| s.degrees.iter().map(|(w, m)| (w.as_slice(), m)))
        .collect();
    let degree_symmetry = failure.is_some()
        || degrees.iter().all(|(w, m)| {
            let rev: Vec<usize> = w.iter().rev().copied().collect();
            degrees.get(rev.as_slice()) == Some(m)
        });
    let json = ms.to_json();
    let status = match (&failure, degree_symmetry) {
        (None, true) => "certified",
        _ => "failed",
    };
    Ok(Certificate {
        config_hash: ms.config_hash(),
        generators: json.generators,
        omega: json.omega,
        succ: json.succ,
        max_len,
        words_checked: shards.iter().map(|s| s.leaves).sum(),
        words_total: shards.iter().map(|s| s.total).sum(),
        max_coeff_bits: shards.iter().map(|s| s.bits).max().unwrap_or(0),
        degree_symmetry,
        status: status.into(),
        orientation: ORIENTATION.into(),
        counterexample: failure,
    })
}
