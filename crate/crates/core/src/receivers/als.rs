use super::{
    c_block, detect, h_block, resolve_scaling, set_c_block, set_h_block, y_blocks, FrameFormat,
    JcdEstimate, ReceiverOptions,
};
use crate::linalg::{khatri_rao, left_pseudo_inverse};
use crate::txmodel::{gamma, stack_c, ReceivedTensor};
use crate::{CMat, Error, Result, C64};

fn check_h(y: &ReceivedTensor, h: &CMat, n_t: usize) -> Result<()> {
    let (m, _, nr) = y.dims();
    if h.shape() != (nr, n_t * m) {
        return Err(Error::Dimension(format!("H is {:?}, expected ({nr}, {})", h.shape(), n_t * m)));
    }
    Ok(())
}

fn check_c(y: &ReceivedTensor, c: &CMat, n_t: usize) -> Result<()> {
    let (m, n, _) = y.dims();
    if c.shape() != (n_t * m, n) {
        return Err(Error::Dimension(format!("C is {:?}, expected ({}, {n})", c.shape(), n_t * m)));
    }
    Ok(())
}

/// `Ĉ = (H ◊ Γ)†·Y(2)ᵀ`, evaluated literally.
pub fn als_step_c_literal(y: &ReceivedTensor, h: &CMat, n_t: usize) -> Result<CMat> {
    check_h(y, h, n_t)?;
    let (m, _, _) = y.dims();
    let a = khatri_rao(h, &gamma(n_t, m));
    let pinv = left_pseudo_inverse(&a).ok_or_else(|| Error::Degenerate("H ◊ Γ rank deficient".into()))?;
    Ok(pinv * y.unfold2())
}

/// `Ĥ = [(Cᵀ ◊ Γ)†·Y(3)ᵀ]ᵀ`, evaluated literally.
pub fn als_step_h_literal(y: &ReceivedTensor, c: &CMat, n_t: usize) -> Result<CMat> {
    check_c(y, c, n_t)?;
    let (m, _, _) = y.dims();
    let a = khatri_rao(&c.transpose(), &gamma(n_t, m));
    let pinv = left_pseudo_inverse(&a).ok_or_else(|| Error::Degenerate("Cᵀ ◊ Γ rank deficient".into()))?;
    Ok((pinv * y.unfold3()).transpose())
}

/// Per-subcarrier form of the `C` update, `C_m = (H_mᴴH_m)⁻¹H_mᴴY_m`.
pub fn als_step_c(y: &ReceivedTensor, h: &CMat, n_t: usize) -> Result<CMat> {
    check_h(y, h, n_t)?;
    let (m_len, n, _) = y.dims();
    let blocks = y_blocks(y);
    let mut c = CMat::zeros(n_t * m_len, n);
    for (m, ym) in blocks.iter().enumerate() {
        let hm = h_block(h, m, n_t);
        let gram = hm.adjoint() * &hm;
        if (0..n_t).any(|t| !(gram[(t, t)].re > 0.0)) {
            return Err(Error::SingularUpdate { subcarrier: m, what: "Σ_r |H_m^(r)|² = 0".into() });
        }
        let cm = gram.lu().solve(&(hm.adjoint() * ym)).ok_or_else(|| Error::SingularUpdate {
            subcarrier: m,
            what: "H_mᴴH_m singular".into(),
        })?;
        set_c_block(&mut c, m, &cm);
    }
    Ok(c)
}

/// Per-subcarrier form of the `H` update, `H_m = Y_mC_mᴴ(C_mC_mᴴ)⁻¹`.
pub fn als_step_h(y: &ReceivedTensor, c: &CMat, n_t: usize) -> Result<CMat> {
    check_c(y, c, n_t)?;
    let (m_len, _, nr) = y.dims();
    let blocks = y_blocks(y);
    let mut h = CMat::zeros(nr, n_t * m_len);
    for (m, ym) in blocks.iter().enumerate() {
        let cm = c_block(c, m, n_t);
        let gram = &cm * cm.adjoint();
        if (0..n_t).any(|t| !(gram[(t, t)].re > 0.0)) {
            return Err(Error::SingularUpdate { subcarrier: m, what: "Σ_n |c_{m,n}|² = 0".into() });
        }
        let hm = gram.lu().solve(&(&cm * ym.adjoint())).ok_or_else(|| Error::SingularUpdate {
            subcarrier: m,
            what: "C_mC_mᴴ singular".into(),
        })?;
        set_h_block(&mut h, m, &hm.adjoint());
    }
    Ok(h)
}

/// Single-antenna scalar `C` update
/// `ĉ_{m,n} = Σ_r H_m^(r)*·y_{m,n}^(r) / Σ_r |H_m^(r)|²`.
pub fn mrc_step_c(y: &ReceivedTensor, h: &CMat) -> Result<CMat> {
    check_h(y, h, 1)?;
    let (m_len, n, nr) = y.dims();
    let mut c = CMat::zeros(m_len, n);
    for m in 0..m_len {
        let den: f64 = (0..nr).map(|r| h[(r, m)].norm_sqr()).sum();
        if den == 0.0 {
            return Err(Error::SingularUpdate { subcarrier: m, what: "Σ_r |H_m^(r)|² = 0".into() });
        }
        for q in 0..n {
            let num: C64 = (0..nr).map(|r| h[(r, m)].conj() * y.get(m, q, r)).sum();
            c[(m, q)] = num / den;
        }
    }
    Ok(c)
}

/// Single-antenna scalar `H` update
/// `Ĥ_m^(r) = Σ_n c_{m,n}*·y_{m,n}^(r) / Σ_n |c_{m,n}|²`.
pub fn mrc_step_h(y: &ReceivedTensor, c: &CMat) -> Result<CMat> {
    check_c(y, c, 1)?;
    let (m_len, n, nr) = y.dims();
    let mut h = CMat::zeros(nr, m_len);
    for m in 0..m_len {
        let den: f64 = (0..n).map(|q| c[(m, q)].norm_sqr()).sum();
        if den == 0.0 {
            return Err(Error::SingularUpdate { subcarrier: m, what: "Σ_n |c_{m,n}|² = 0".into() });
        }
        for r in 0..nr {
            let num: C64 = (0..n).map(|q| c[(m, q)].conj() * y.get(m, q, r)).sum();
            h[(r, m)] = num / den;
        }
    }
    Ok(h)
}

/// `‖𝒴 − [[Γ, Cᵀ, H]]‖_F`.
pub fn objective(y: &ReceivedTensor, h: &CMat, c: &CMat, n_t: usize) -> f64 {
    let (m_len, n, nr) = y.dims();
    let mut acc = 0.0;
    for r in 0..nr {
        for q in 0..n {
            for m in 0..m_len {
                let mut z = y.get(m, q, r);
                for t in 0..n_t {
                    z -= h[(r, t * m_len + m)] * c[(t * m_len + m, q)];
                }
                acc += z.norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn stalled(prev: f64, cur: f64, tol: f64, y_norm: f64) -> bool {
    cur <= 1e-13 * y_norm || (prev - cur).abs() <= tol * prev.max(f64::MIN_POSITIVE)
}

/// Plain ALS from `init`: alternate the two conditional LS updates until
/// the relative objective change falls below `tol`, then resolve scaling
/// from the preamble and detect.
pub fn als_receiver(
    y: &ReceivedTensor,
    init: &CMat,
    opts: &ReceiverOptions,
    frame: &FrameFormat,
) -> Result<JcdEstimate> {
    let n_t = frame.n_t;
    let y_norm = y.frob_sq().sqrt();
    let (m_len, n, _) = y.dims();
    let mut h = init.clone();
    let mut c = CMat::zeros(n_t * m_len, n);
    let mut trace = Vec::new();
    let mut best = (f64::INFINITY, h.clone(), c.clone());
    let mut converged = false;
    for _ in 0..opts.max_iters {
        c = als_step_c(y, &h, n_t)?;
        h = als_step_h(y, &c, n_t)?;
        let f = objective(y, &h, &c, n_t);
        let prev = trace.last().copied();
        trace.push(f);
        if f < best.0 {
            best = (f, h.clone(), c.clone());
        }
        if f <= 1e-13 * y_norm || prev.is_some_and(|p| stalled(p, f, opts.tol, y_norm)) {
            converged = true;
            break;
        }
    }
    let (_, h, c) = if converged { (0.0, h, c) } else { best };
    let s = resolve_scaling(&h, &c, frame);
    Ok(JcdEstimate {
        d: detect(&s.c, frame),
        h: s.h,
        c: s.c,
        iters: trace.len(),
        objective_trace: trace,
        converged,
        scale: s.alpha,
        unresolved: s.unresolved,
    })
}

/// Hard-decision projection of a virtual-symbol estimate: demap, decide
/// (preamble forced), remap.
pub(crate) fn project(c: &CMat, frame: &FrameFormat) -> (Vec<CMat>, CMat) {
    let d = detect(c, frame);
    let cs: Vec<CMat> = d.iter().map(|dt| frame.remap(dt)).collect();
    (d, stack_c(&cs))
}

/// Shared loop of informed ALS and ILSP. With `rescale`, the scaling
/// ambiguity is resolved before every projection.
pub(crate) fn projected_als(
    y: &ReceivedTensor,
    init: &CMat,
    opts: &ReceiverOptions,
    frame: &FrameFormat,
    rescale: bool,
) -> Result<JcdEstimate> {
    if !frame.invertible() {
        return Err(Error::UnsupportedVariant(
            "decision projection needs an invertible symbol mapping (OQAM or CP-OFDM)".into(),
        ));
    }
    let n_t = frame.n_t;
    let y_norm = y.frob_sq().sqrt();
    let mut h = init.clone();
    let mut d_prev: Option<Vec<CMat>> = None;
    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    for _ in 0..opts.max_iters {
        let mut c = als_step_c(y, &h, n_t)?;
        if rescale {
            let s = resolve_scaling(&h, &c, frame);
            c = s.c;
        }
        let (d, c_proj) = project(&c, frame);
        h = als_step_h(y, &c_proj, n_t)?;
        let f = objective(y, &h, &c_proj, n_t);
        let same = d_prev.as_ref().is_some_and(|p| *p == d);
        let prev = trace.last().copied();
        trace.push(f);
        d_prev = Some(d);
        if same && prev.is_some_and(|p| stalled(p, f, opts.tol, y_norm)) {
            converged = true;
            break;
        }
    }
    // `h` was fitted to projected symbols whose preamble columns are
    // exact, so its scale is already pinned
    let c = als_step_c(y, &h, n_t)?;
    Ok(JcdEstimate {
        d: detect(&c, frame),
        h,
        c,
        iters: trace.len(),
        objective_trace: trace,
        converged,
        scale: vec![crate::C64::new(1.0, 0.0); n_t * frame.m()],
        unresolved: Vec::new(),
    })
}

/// ALS with a hard-decision projection of `Ĉ` onto the symbol alphabet
/// (through the demap/remap algebra) between the two updates.
pub fn informed_als_receiver(
    y: &ReceivedTensor,
    init: &CMat,
    opts: &ReceiverOptions,
    frame: &FrameFormat,
) -> Result<JcdEstimate> {
    projected_als(y, init, opts, frame, true)
}
