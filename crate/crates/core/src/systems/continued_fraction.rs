//! Continued-fraction convergents for rotation numbers.

/// Convergents p_k/q_k of [0; a_1, a_2, ...].
#[derive(Debug, Clone)]
pub struct Convergents {
    pub terms: Vec<u64>,
    pub p: Vec<u128>,
    pub q: Vec<u128>,
}

impl Convergents {
    pub fn from_terms(terms: &[u64]) -> Self {
        let mut p: Vec<u128> = Vec::with_capacity(terms.len());
        let mut q: Vec<u128> = Vec::with_capacity(terms.len());
        let (mut p_prev, mut p_cur) = (1u128, 0u128);
        let (mut q_prev, mut q_cur) = (0u128, 1u128);
        for &a in terms {
            let p_next = a as u128 * p_cur + p_prev;
            let q_next = a as u128 * q_cur + q_prev;
            p_prev = p_cur;
            p_cur = p_next;
            q_prev = q_cur;
            q_cur = q_next;
            p.push(p_cur);
            q.push(q_cur);
        }
        Convergents {
            terms: terms.to_vec(),
            p,
            q,
        }
    }

    /// The value of the final convergent.
    pub fn value(&self) -> f64 {
        let k = self.p.len() - 1;
        self.p[k] as f64 / self.q[k] as f64
    }

    pub fn depth(&self) -> usize {
        self.terms.len()
    }
}

/// Partial quotients a_k = k^k, cut off once the denominator passes `cap`.
/// A couple of enormous quotients is all a rotation needs to break the
/// hitting-time law at observable radii.
pub fn liouville_terms(cap: u128) -> Vec<u64> {
    let mut terms: Vec<u64> = Vec::new();
    let (mut q_prev, mut q_cur) = (0u128, 1u128);
    for k in 1u32.. {
        let a = (k as u64).pow(k);
        let q_next = a as u128 * q_cur + q_prev;
        q_prev = q_cur;
        q_cur = q_next;
        terms.push(a);
        if q_cur > cap {
            break;
        }
    }
    terms
}
