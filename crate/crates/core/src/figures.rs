//! Data series behind the seven comb figures. Step figures use exact integers;
//! continuous curves carry interval midpoints and widths.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{self, ExactError};
use crate::real::{iv_f2, iv_phi1, iv_phi2, iv_pow_2, Constants, Interval, RealError, GUARD_BITS};
use crate::segments::{self, SegmentError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FigureError {
    #[error("figure id must be in 1..=7, got {0}")]
    UnknownFigure(u8),
    #[error("sampling step must be positive and finite")]
    BadStep,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Real(#[from] RealError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub mid: f64,
    pub width: f64,
    /// Exact decimal value, for integer-valued step functions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Comb piece the point belongs to; never join points with different ids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment: Option<u64>,
}

impl Point {
    fn exact(x: f64, v: &BigUint) -> Self {
        Point {
            x,
            mid: v.to_string().parse().unwrap_or(f64::INFINITY),
            width: 0.0,
            exact: Some(v.to_string()),
            segment: None,
        }
    }

    fn enclosed(x: f64, v: &Interval) -> Self {
        Point {
            x,
            mid: v.mid_f64(),
            width: v.width_f64(),
            exact: None,
            segment: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub series: String,
    pub x: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Annotation {
    pub label: String,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mid: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSeries {
    pub figure_id: u8,
    pub x_label: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub columns: Vec<Series>,
    pub skipped: Vec<Skipped>,
    pub annotations: Vec<Annotation>,
}

impl FigureSeries {
    fn new(figure_id: u8, step: Option<f64>) -> Self {
        FigureSeries {
            figure_id,
            x_label: x_label(figure_id),
            step,
            columns: Vec::new(),
            skipped: Vec::new(),
            annotations: Vec::new(),
        }
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.columns.iter().find(|s| s.name == name)
    }

    pub fn point_count(&self) -> usize {
        self.columns.iter().map(|s| s.points.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureConfig {
    pub k_min: u64,
    pub k_max: u64,
    pub n_min: u64,
    pub n_max: u64,
    pub x_max: f64,
    pub step: f64,
    pub bits: u32,
}

impl Default for FigureConfig {
    fn default() -> Self {
        FigureConfig {
            k_min: 0,
            k_max: 10,
            n_min: 1,
            n_max: 20,
            x_max: 10.0,
            step: 0.01,
            bits: 128,
        }
    }
}

/// Name of the horizontal coordinate of a figure.
pub fn x_label(figure_id: u8) -> &'static str {
    match figure_id {
        1 => "k",
        5 | 7 => "n",
        6 => "t",
        _ => "x",
    }
}

/// `f₂(k) = 2^k{(3/2)^k} + ⌊(3/2)^k⌋ = R + m`, with `f₂(0) = 1`.
pub fn f2_exact(k: u64) -> Result<BigUint, ExactError> {
    if k == 0 {
        return Ok(BigUint::from(1u32));
    }
    let w = exact::power_witness(k)?;
    Ok(w.r + w.m)
}

/// Sampling grid `x_i = i·step` on `[start, end]`. The step is turned into a
/// decimal fraction first so grid points print cleanly and enclose exactly.
struct Grid {
    num: i64,
    den: i64,
}

impl Grid {
    fn new(step: f64) -> Result<Self, FigureError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(FigureError::BadStep);
        }
        let mut den = 1i64;
        while den < 1_000_000_000
            && ((step * den as f64).round() - step * den as f64).abs() > 1e-9 * den as f64
        {
            den *= 10;
        }
        let num = (step * den as f64).round() as i64;
        if num <= 0 {
            return Err(FigureError::BadStep);
        }
        Ok(Grid { num, den })
    }

    fn points(&self, start: f64, end: f64) -> impl Iterator<Item = (f64, i64, i64)> + '_ {
        let first = (start * self.den as f64 / self.num as f64).ceil().max(0.0) as i64;
        let last = (end * self.den as f64 / self.num as f64 + 1e-9).floor() as i64;
        (first..=last).map(move |i| {
            let num = i * self.num;
            (num as f64 / self.den as f64, num, self.den)
        })
    }
}

fn strict_pair(k_lo: u64, k_hi: u64) -> Result<(Series, Series), FigureError> {
    let mut f1 = Series {
        name: "f1".into(),
        points: Vec::new(),
    };
    let mut f2 = Series {
        name: "f2".into(),
        points: Vec::new(),
    };
    for k in k_lo..=k_hi {
        f1.points
            .push(Point::exact(k as f64, &(BigUint::from(1u32) << k)));
        f2.points.push(Point::exact(k as f64, &f2_exact(k)?));
    }
    Ok((f1, f2))
}

fn figure1(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(1, None);
    let (f1, f2) = strict_pair(cfg.k_min, cfg.k_max)?;
    fig.columns = vec![f1, f2];
    Ok(fig)
}

/// `F₂` on the grid, with the comb piece id `⌊(3/2)^x⌋` attached to each point.
/// Points whose floor cannot be pinned are skipped rather than guessed.
fn comb(
    cfg: &FigureConfig,
    fig: &mut FigureSeries,
    only_above: bool,
) -> Result<Series, FigureError> {
    let grid = Grid::new(cfg.step)?;
    let name = if only_above { "F2_top" } else { "F2" };
    let mut out = Series {
        name: name.into(),
        points: Vec::new(),
    };
    for (x, num, den) in grid.points(0.0, cfg.x_max) {
        let xi = Interval::from_ratio(num, den, cfg.bits)?;
        let v = match iv_f2(&xi, cfg.bits) {
            Ok(v) => v,
            Err(RealError::FloorAmbiguous { .. }) => {
                fig.skipped.push(Skipped {
                    series: name.into(),
                    x,
                    reason: "floor of (3/2)^x ambiguous".into(),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if only_above {
            let f1 = iv_pow_2(&xi, cfg.bits)?;
            if !f1.certainly_lt(&v) {
                continue;
            }
        }
        let floor = iv_phi1(&xi, cfg.bits + GUARD_BITS)?
            .certain_floor()
            .and_then(|f| u64::try_from(f).ok());
        let mut p = Point::enclosed(x, &v);
        p.segment = floor;
        out.points.push(p);
    }
    Ok(out)
}

fn curve<F>(cfg: &FigureConfig, name: &str, f: F) -> Result<Series, FigureError>
where
    F: Fn(&Interval, u32) -> Result<Interval, RealError>,
{
    let grid = Grid::new(cfg.step)?;
    let mut out = Series {
        name: name.into(),
        points: Vec::new(),
    };
    for (x, num, den) in grid.points(0.0, cfg.x_max) {
        let xi = Interval::from_ratio(num, den, cfg.bits)?;
        out.points.push(Point::enclosed(x, &f(&xi, cfg.bits)?));
    }
    Ok(out)
}

/// Positions `u_n` of the comb breaks that fall in `(0, x_max]`.
fn break_annotations(cfg: &FigureConfig, fig: &mut FigureSeries) -> Result<(), FigureError> {
    for n in 1u64.. {
        let u = segments::u_n(n, cfg.bits)?;
        if u.mid_f64() > cfg.x_max {
            break;
        }
        fig.annotations.push(Annotation {
            label: format!("break_u{n}"),
            x: u.mid_f64(),
            mid: None,
            width: Some(u.width_f64()),
        });
    }
    Ok(())
}

fn figure2(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(2, Some(cfg.step));
    let (f1, f2) = strict_pair(0, cfg.x_max.max(0.0).floor() as u64)?;
    let loose1 = curve(cfg, "F1", iv_pow_2)?;
    let loose2 = comb(cfg, &mut fig, false)?;
    fig.columns = vec![f1, f2, loose1, loose2];
    break_annotations(cfg, &mut fig)?;
    Ok(fig)
}

fn figure3(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(3, Some(cfg.step));
    let f2 = comb(cfg, &mut fig, false)?;
    fig.columns = vec![
        f2,
        curve(cfg, "phi1", iv_phi1)?,
        curve(cfg, "phi2", iv_phi2)?,
    ];
    break_annotations(cfg, &mut fig)?;
    Ok(fig)
}

fn figure4(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(4, Some(cfg.step));
    let top = comb(cfg, &mut fig, true)?;
    fig.columns = vec![
        top,
        curve(cfg, "F1", iv_pow_2)?,
        curve(cfg, "phi2", iv_phi2)?,
    ];
    break_annotations(cfg, &mut fig)?;
    Ok(fig)
}

fn figure5(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(5, None);
    let mut s = Series {
        name: "u_n".into(),
        points: Vec::new(),
    };
    for n in cfg.n_min.max(1)..=cfg.n_max {
        s.points
            .push(Point::enclosed(n as f64, &segments::u_n(n, cfg.bits)?));
    }
    fig.columns.push(s);
    Ok(fig)
}

/// `x(t)` on `(0, x_max + 1]` with the point `t = 1` left out, plus the integer
/// solutions `t_n`. The gap and the limiting value `1/q` are annotations.
fn figure6(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(6, Some(cfg.step));
    let grid = Grid::new(cfg.step)?;
    let mut xs = Series {
        name: "x_of_t".into(),
        points: Vec::new(),
    };
    for (t, num, den) in grid.points(cfg.step, cfg.x_max + 1.0) {
        if num == den {
            fig.skipped.push(Skipped {
                series: "x_of_t".into(),
                x: t,
                reason: "singular at t = 1".into(),
            });
            continue;
        }
        let ti = Interval::from_ratio(num, den, cfg.bits)?;
        let mut p = Point::enclosed(t, &segments::x_of_t(&ti, cfg.bits)?);
        p.segment = Some(u64::from(num > den));
        xs.points.push(p);
    }
    let mut tn = Series {
        name: "t_n".into(),
        points: Vec::new(),
    };
    let n_top = cfg.n_max.min(cfg.x_max.max(0.0).floor() as u64);
    for n in cfg.n_min.max(2)..=n_top {
        let t = segments::solve_t_n(n, cfg.bits)?;
        tn.points.push(Point::enclosed(n as f64, &t));
    }
    fig.columns = vec![xs, tn];
    let inv_q = inverse_q(cfg.bits.max(64))?;
    fig.annotations.push(Annotation {
        label: "gap_t_eq_1".into(),
        x: 1.0,
        mid: None,
        width: None,
    });
    fig.annotations.push(Annotation {
        label: "limit_x_at_t_1".into(),
        x: 1.0,
        mid: Some(inv_q.mid_f64()),
        width: Some(inv_q.width_f64()),
    });
    Ok(fig)
}

fn figure7(cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    let mut fig = FigureSeries::new(7, None);
    let mut s = Series {
        name: "l_n".into(),
        points: Vec::new(),
    };
    for n in cfg.n_min.max(2)..=cfg.n_max {
        s.points
            .push(Point::enclosed(n as f64, &segments::l_n(n, cfg.bits)?));
    }
    fig.columns.push(s);
    Ok(fig)
}

pub fn emit_figure(figure_id: u8, cfg: &FigureConfig) -> Result<FigureSeries, FigureError> {
    match figure_id {
        1 => figure1(cfg),
        2 => figure2(cfg),
        3 => figure3(cfg),
        4 => figure4(cfg),
        5 => figure5(cfg),
        6 => figure6(cfg),
        7 => figure7(cfg),
        other => Err(FigureError::UnknownFigure(other)),
    }
}

/// `1/q` enclosed at `bits`, as reported alongside figure 6.
pub fn inverse_q(bits: u32) -> Result<Interval, RealError> {
    let wp = bits + GUARD_BITS;
    let v = Interval::from_int(1, wp).div(&Constants::at(wp).q)?;
    Ok(v.rounded(bits))
}
