// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use clap::ValueEnum;
use cvneg::negativity::{en_analytic, en_from_transfer};
use cvneg::phase_space::ModeTransfer;
use cvneg::{ChannelParams, NegativityReport};
use rayon::prelude::*;

use crate::format::{write_csv, write_json_lines, Cell};
use crate::{ChannelArgs, Failure, Format};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVar {
    #[value(name = "t")]
    Time,
    #[value(name = "r")]
    Squeezing,
    #[value(name = "T")]
    Transmissivity,
    #[value(name = "kappa")]
    Kappa,
    #[value(name = "g")]
    Gain,
}

impl SweepVar {
    fn name(self) -> &'static str {
        match self {
            SweepVar::Time => "t",
            SweepVar::Squeezing => "r",
            SweepVar::Transmissivity => "T",
            SweepVar::Kappa => "kappa",
            SweepVar::Gain => "g",
        }
    }
}

const CHANNEL_HEADER: [&str; 9] = ["r", "kappa1", "g1", "kappa2", "g2", "t", "e_n", "trace_norm", "entangled"];
const LOSS_HEADER: [&str; 5] = ["r", "T", "e_n", "trace_norm", "entangled"];

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub grid: Vec<f64>,
    pub r: f64,
    /// Equal pure loss on both modes instead of a rate channel.
    pub transmissivity: Option<f64>,
    pub channel: ChannelArgs,
    pub format: Format,
}

fn invalid(msg: String) -> Failure {
    Failure::Invalid(format!("invalid argument: {msg}"))
}

/// `count` points from `start` to `stop`, both ends exact.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let span = stop - start;
    (0..count)
        .map(|i| if i + 1 == count { stop } else { start + span * i as f64 / (count - 1) as f64 })
        .collect()
}

fn rates_given(ch: &ChannelArgs) -> bool {
    [ch.kappa, ch.g, ch.kappa1, ch.g1, ch.kappa2, ch.g2].iter().any(Option::is_some)
}

impl SweepSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        var: SweepVar,
        start: f64,
        stop: f64,
        count: usize,
        r: f64,
        transmissivity: Option<f64>,
        channel: ChannelArgs,
        format: Format,
    ) -> Result<SweepSpec, Failure> {
        if count < 2 {
            return Err(invalid(format!("count must be at least 2, got {count}")));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(invalid(format!("start and stop must be finite, got {start} and {stop}")));
        }
        if start >= stop {
            return Err(invalid(format!("start must be below stop, got start {start} and stop {stop}")));
        }
        if var == SweepVar::Transmissivity && stop > 1.0 {
            return Err(invalid(format!("T must lie in [0, 1], got stop {stop}")));
        }
        if start < 0.0 {
            return Err(invalid(format!("{} must be non-negative, got start {start}", var.name())));
        }
        if !r.is_finite() || r < 0.0 {
            return Err(invalid(format!("r must be finite and non-negative, got {r}")));
        }
        if let Some(t) = transmissivity {
            if var != SweepVar::Squeezing {
                return Err(invalid("T is a fixed parameter only for --var r sweeps".into()));
            }
            if !(0.0..=1.0).contains(&t) {
                return Err(invalid(format!("T must lie in [0, 1], got {t}")));
            }
        }
        let pure_loss = var == SweepVar::Transmissivity || transmissivity.is_some();
        if pure_loss && (rates_given(&channel) || channel.t != 0.0) {
            return Err(invalid("T sweeps use equal pure loss; do not combine with kappa, g or t".into()));
        }
        let spec = SweepSpec { var, grid: linspace(start, stop, count), r, transmissivity, channel, format };
        if !pure_loss {
            // fixed parameters must form a valid channel on their own
            spec.channel_at(start)?;
        }
        Ok(spec)
    }

    fn pure_loss(&self) -> bool {
        self.var == SweepVar::Transmissivity || self.transmissivity.is_some()
    }

    fn channel_at(&self, x: f64) -> Result<ChannelParams, Failure> {
        let mut args = self.channel;
        match self.var {
            SweepVar::Time => args.t = x,
            SweepVar::Kappa => {
                args.kappa1 = Some(x);
                args.kappa2 = Some(x);
            }
            SweepVar::Gain => {
                args.g1 = Some(x);
                args.g2 = Some(x);
            }
            SweepVar::Squeezing | SweepVar::Transmissivity => {}
        }
        Ok(args.params()?)
    }

    fn row(&self, x: f64) -> Result<Vec<Cell>, Failure> {
        let r = if self.var == SweepVar::Squeezing { x } else { self.r };
        let tail = |rep: &NegativityReport| {
            [Cell::Num(rep.e_n), Cell::Num(rep.trace_norm), Cell::Bool(rep.entangled)]
        };
        if self.pure_loss() {
            let t = if self.var == SweepVar::Transmissivity { x } else { self.transmissivity.unwrap_or(1.0) };
            let loss = ModeTransfer::pure_loss(t);
            let rep = en_from_transfer(r, loss, loss)?;
            let mut row = vec![Cell::Num(r), Cell::Num(t)];
            row.extend(tail(&rep));
            return Ok(row);
        }
        let ch = self.channel_at(x)?;
        let rep = en_analytic(r, &ch)?;
        let mut row: Vec<Cell> =
            [r, ch.kappa1, ch.g1, ch.kappa2, ch.g2, ch.t].into_iter().map(Cell::Num).collect();
        row.extend(tail(&rep));
        Ok(row)
    }

    /// Rows in grid order; points are evaluated in parallel.
    pub fn evaluate(&self) -> Result<Vec<Vec<Cell>>, Failure> {
        self.grid.par_iter().map(|&x| self.row(x)).collect()
    }

    pub fn header(&self) -> &'static [&'static str] {
        if self.pure_loss() {
            &LOSS_HEADER
        } else {
            &CHANNEL_HEADER
        }
    }

    pub fn write(&self, rows: &[Vec<Cell>], sink: &mut dyn Write) -> Result<(), Failure> {
        match self.format {
            Format::Csv => write_csv(self.header(), rows, sink),
            Format::Json => write_json_lines(self.header(), rows, sink),
        }
    }
}
