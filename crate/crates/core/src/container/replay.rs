use crate::error::{Error, Result};
use crate::num::Real;
use crate::params::ProblemParams;
use crate::set::IntSet;

use super::build::PhasePlan;
use super::engine::run_core;
use super::{Certificate, ContainerChain};

/// Rebuilds `C₀ ⊇ … ⊇ C_L` from the certificate alone.
///
/// In phase `j` the question "is `u ∈ I`" is answered by `u ∈ R_j`; the run
/// must then select exactly `R_j`.
pub fn reconstruct_containers<R: Real>(cert: &Certificate, params: &ProblemParams<R>) -> Result<ContainerChain> {
    if cert.n != params.n {
        return Err(Error::MalformedCertificate(format!(
            "certificate is for n = {}, parameters for n = {}",
            cert.n, params.n
        )));
    }
    cert.check_shape()?;
    let n = cert.n;
    let rank = cert.tie_order.ranks(n)?;
    let mut c = vec![IntSet::interval(n).difference(&cert.r[0])];
    for j in 1..=cert.phases {
        let prev = &c[j - 1];
        let (rj, uj) = (&cert.r[j], &cert.u[j - 1]);
        if !uj.is_subset(prev) {
            return Err(Error::MalformedCertificate(format!("U_{} is not inside C_{}", j - 1, j - 1)));
        }
        if !rj.is_subset(prev) {
            return Err(Error::MalformedCertificate(format!("R_{j} is not inside C_{}", j - 1)));
        }
        let plan = PhasePlan::new(params, j, prev.len());
        let out = run_core(n, prev, rj, uj, plan.threshold, |s| plan.stop(s), &rank, false)?;
        if &out.state.selected != rj {
            return Err(Error::MalformedCertificate(format!(
                "phase {j} selected {} vertices, R_{j} lists {}",
                out.state.selected.len(),
                rj.len()
            )));
        }
        c.push(out.state.available);
    }
    Ok(ContainerChain { c })
}
