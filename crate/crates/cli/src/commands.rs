//! Table-producing commands behind `potential`, `sweep` and `wavefunction`.

use anyhow::{bail, Result};
use hyperstep::model::z_of_x;
use hyperstep::{
    connection_coeffs, integrate, make_context, transmission, wavefunction, BarrierParams, Complex64, GridSpec,
};
use rayon::prelude::*;

use crate::csv::Table;

/// Swept quantity of a [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Energy,
    Sigma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub params: BarrierParams,
    /// Fixed energy for σ sweeps; ignored for energy sweeps.
    pub energy: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_range(self.start, self.stop, self.count)?;
        if self.variable == Variable::Energy && !(self.start > self.params.v0) {
            bail!(
                "energy sweep must stay above V0 = {} (got start = {})",
                self.params.v0,
                self.start
            );
        }
        Ok(())
    }

    /// Grid values, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

fn check_range(from: f64, to: f64, count: usize) -> Result<()> {
    if !(from.is_finite() && to.is_finite()) {
        bail!("range endpoints must be finite");
    }
    if !(from < to) {
        bail!("range needs from < to (got {from} .. {to})");
    }
    if count < 2 {
        bail!("count must be at least 2 (got {count})");
    }
    Ok(())
}

pub fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    let span = to - from;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                to
            } else {
                from + span * (i as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

/// `x,V,z` on a uniform grid.
pub fn potential_table(p: &BarrierParams, from: f64, to: f64, count: usize) -> Result<Table> {
    p.validate()?;
    check_range(from, to, count)?;
    let mut t = Table::new(&["x", "V", "z"]);
    t.rows = linspace(from, to, count)
        .into_iter()
        .map(|x| vec![x, p.potential(x), z_of_x(p, x)])
        .collect();
    Ok(t)
}

#[derive(Debug, Clone, Copy)]
struct SweepRow {
    t: f64,
    r: f64,
    t_sp: f64,
    t_num: f64,
}

const NAN_ROW: SweepRow = SweepRow {
    t: f64::NAN,
    r: f64::NAN,
    t_sp: f64::NAN,
    t_num: f64::NAN,
};

fn sweep_point(p: &BarrierParams, energy: f64, with_oracle: bool) -> SweepRow {
    if p.validate().is_err() {
        return NAN_ROW;
    }
    let Ok(res) = transmission(p, energy) else {
        return NAN_ROW;
    };
    let t_num = if with_oracle && energy > p.v0.max(p.v_near()) {
        integrate(p, energy, &GridSpec::default_for(p))
            .map(|n| n.t_num)
            .unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    SweepRow {
        t: res.t,
        r: res.r,
        t_sp: res.t_sp,
        t_num,
    }
}

/// Result of a sweep: the table plus how many rows came out as NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    pub failed_rows: usize,
}

/// `E,T,R,T_SP[,T_num]` or `sigma,T,R,T_SP[,T_num]`, one row per grid
/// point in grid order. Points outside the physical domain give NaN rows.
pub fn sweep_table(spec: &SweepSpec, with_oracle: bool) -> Result<SweepOutput> {
    spec.validate()?;
    let first = match spec.variable {
        Variable::Energy => "E",
        Variable::Sigma => "sigma",
    };
    let mut header = vec![first, "T", "R", "T_SP"];
    if with_oracle {
        header.push("T_num");
    }
    let grid = spec.grid();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&v| match spec.variable {
            Variable::Energy => sweep_point(&spec.params, v, with_oracle),
            Variable::Sigma => {
                let p = BarrierParams {
                    sigma: v,
                    ..spec.params
                };
                sweep_point(&p, spec.energy, with_oracle)
            }
        })
        .collect();

    let failed_rows = rows.iter().filter(|r| r.t.is_nan()).count();
    let mut table = Table::new(&header);
    table.rows = grid
        .iter()
        .zip(&rows)
        .map(|(&v, r)| {
            let mut row = vec![v, r.t, r.r, r.t_sp];
            if with_oracle {
                row.push(r.t_num);
            }
            row
        })
        .collect();
    Ok(SweepOutput { table, failed_rows })
}

/// `x,re_psi,im_psi,abs2_psi,V` for the scattering state normalised to a
/// unit incident wave.
pub fn wavefunction_table(p: &BarrierParams, energy: f64, from: f64, to: f64, count: usize) -> Result<Table> {
    p.validate()?;
    check_range(from, to, count)?;
    let ctx = make_context(p, energy)?;
    let amp = connection_coeffs(&ctx, Complex64::new(1.0, 0.0))?;
    let xs = linspace(from, to, count);
    let psis: Vec<hyperstep::Result<Complex64>> = xs
        .par_iter()
        .map(|&x| wavefunction(&ctx, x, Complex64::new(1.0, 0.0)).map(|v| v / amp.a))
        .collect();
    let mut t = Table::new(&["x", "re_psi", "im_psi", "abs2_psi", "V"]);
    for (x, psi) in xs.into_iter().zip(psis) {
        let psi = psi?;
        t.rows.push(vec![x, psi.re, psi.im, psi.norm_sqr(), p.potential(x)]);
    }
    Ok(t)
}
