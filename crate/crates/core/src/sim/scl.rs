//! Successive cancellation list decoding with LLR path metrics (no CRC).

use super::sc::{check_llrs, CheckNode, Decoded, ScState};
use crate::error::{Error, Result};
use crate::polar::{BitBlock, CodeSpec};

/// Metric increment for deciding `bit` against leaf LLR `l`: `ln(1 + e^{-(1-2bit) l})`.
#[inline]
fn penalty(l: f64, bit: u8) -> f64 {
    let x = if bit == 0 { -l } else { l };
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[derive(Debug, Clone)]
struct Path {
    state: ScState,
    u: Vec<u8>,
    metric: f64,
}

/// Reusable list decoder. A list of one reproduces [`super::ScDecoder`] exactly.
#[derive(Debug, Clone)]
pub struct SclDecoder {
    template: Vec<Option<u8>>,
    info_set: Vec<usize>,
    list_size: usize,
    rule: CheckNode,
}

impl SclDecoder {
    pub fn new(spec: &CodeSpec, list_size: usize, rule: CheckNode) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::invalid("list size must be at least 1"));
        }
        Ok(SclDecoder {
            template: spec.frozen_template(),
            info_set: spec.info_set().to_vec(),
            list_size,
            rule,
        })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn decode(&self, llrs: &[f64]) -> Decoded {
        let n = self.template.len();
        let mut root = ScState::new(n);
        root.load(llrs);
        let mut paths = vec![Path {
            state: root,
            u: vec![0; n],
            metric: 0.0,
        }];
        let mut leaves = Vec::with_capacity(self.list_size);
        let mut candidates: Vec<(usize, u8, f64)> = Vec::with_capacity(2 * self.list_size);

        for (phase, frozen) in self.template.iter().enumerate() {
            leaves.clear();
            for p in paths.iter_mut() {
                leaves.push(p.state.leaf_llr(phase, self.rule));
            }
            if let Some(bit) = *frozen {
                for (p, &l) in paths.iter_mut().zip(&leaves) {
                    p.metric += penalty(l, bit);
                    p.u[phase] = bit;
                    p.state.commit(phase, bit);
                }
                continue;
            }
            candidates.clear();
            for (idx, (p, &l)) in paths.iter().zip(&leaves).enumerate() {
                candidates.push((idx, 0, p.metric + penalty(l, 0)));
                candidates.push((idx, 1, p.metric + penalty(l, 1)));
            }
            // stable: ties keep path order, then bit 0 before bit 1
            candidates.sort_by(|a, b| a.2.total_cmp(&b.2));
            candidates.truncate(self.list_size);

            let mut uses = vec![0usize; paths.len()];
            for &(idx, _, _) in &candidates {
                uses[idx] += 1;
            }
            let mut old: Vec<Option<Path>> = paths.drain(..).map(Some).collect();
            for &(idx, bit, metric) in &candidates {
                uses[idx] -= 1;
                let mut p = if uses[idx] == 0 {
                    old[idx].take().expect("each path taken once")
                } else {
                    old[idx].as_ref().expect("still present").clone()
                };
                p.metric = metric;
                p.u[phase] = bit;
                p.state.commit(phase, bit);
                paths.push(p);
            }
        }

        let best = paths
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.metric.total_cmp(&b.1.metric).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i)
            .expect("at least one path");
        let best = &paths[best];
        Decoded {
            info_bits: self.info_set.iter().map(|&i| best.u[i - 1]).collect(),
            codeword: BitBlock::new(best.state.codeword().to_vec()).expect("bits"),
        }
    }
}

pub fn scl_decode(spec: &CodeSpec, llrs: &[f64], list_size: usize) -> Result<Decoded> {
    check_llrs(spec, llrs)?;
    Ok(SclDecoder::new(spec, list_size, CheckNode::Exact)?.decode(llrs))
}
