use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::format;

/// Right-continuous integer step function on `[start, 1]`: `initial_value`
/// on `[start, jump_times[0])`, then `values[i]` on
/// `[jump_times[i], jump_times[i+1])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction {
    start: f64,
    initial_value: i64,
    jump_times: Vec<f64>,
    values: Vec<i64>,
}

/// Where a step function settles at or below a level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Settle {
    pub time: f64,
    /// The function was already at or below the level at the window start;
    /// `time` is then the window start.
    pub before_window: bool,
}

impl StepFunction {
    pub fn new(start: f64, initial_value: i64, jump_times: Vec<f64>, values: Vec<i64>) -> Result<Self> {
        if jump_times.len() != values.len() {
            return Err(invalid("jump_times and values differ in length"));
        }
        if jump_times.first().is_some_and(|&t| t <= start) || jump_times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("jump times must be strictly increasing and after the start"));
        }
        let mut prev = initial_value;
        for &v in &values {
            if v == prev {
                return Err(invalid("consecutive values must differ"));
            }
            prev = v;
        }
        Ok(StepFunction {
            start,
            initial_value,
            jump_times,
            values,
        })
    }

    /// Counts `#{i : birth_i <= t < death_i}` for `t >= start`. Deaths may be
    /// infinite. Coincident endpoints are merged and zero net changes dropped.
    pub fn from_intervals(intervals: impl IntoIterator<Item = (f64, f64)>, start: f64) -> Self {
        let mut initial = 0i64;
        let mut events: Vec<(f64, i64)> = Vec::new();
        for (birth, death) in intervals {
            if birth >= death || death <= start {
                continue;
            }
            if birth <= start {
                initial += 1;
            } else {
                events.push((birth, 1));
            }
            if death.is_finite() {
                events.push((death, -1));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut jump_times = Vec::new();
        let mut values = Vec::new();
        let mut cur = initial;
        let mut i = 0;
        while i < events.len() {
            let t = events[i].0;
            let mut delta = 0;
            while i < events.len() && events[i].0 == t {
                delta += events[i].1;
                i += 1;
            }
            if delta != 0 {
                cur += delta;
                jump_times.push(t);
                values.push(cur);
            }
        }
        StepFunction {
            start,
            initial_value: initial,
            jump_times,
            values,
        }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn initial_value(&self) -> i64 {
        self.initial_value
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value_at(&self, t: f64) -> i64 {
        match self.jump_times.partition_point(|&j| j <= t) {
            0 => self.initial_value,
            i => self.values[i - 1],
        }
    }

    pub fn terminal_value(&self) -> i64 {
        self.values.last().copied().unwrap_or(self.initial_value)
    }

    pub fn max_value(&self) -> i64 {
        self.values.iter().copied().fold(self.initial_value, i64::max)
    }

    /// Smallest time after which the function stays `<= level`.
    pub fn settle_time(&self, level: i64) -> Result<Settle> {
        let terminal = self.terminal_value();
        if terminal > level {
            return Err(Error::WindowTooShort { terminal, bound: level });
        }
        match self.values.iter().rposition(|&v| v > level) {
            Some(i) => Ok(Settle {
                time: self.jump_times[i + 1],
                before_window: false,
            }),
            None if self.initial_value > level => Ok(Settle {
                time: self.jump_times[0],
                before_window: false,
            }),
            None => Ok(Settle {
                time: self.start,
                before_window: true,
            }),
        }
    }

    /// CSV with header `t,value`: the start row then one row per jump.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "t,value")?;
        writeln!(out, "{},{}", format::real(self.start), self.initial_value)?;
        for (t, v) in self.jump_times.iter().zip(&self.values) {
            writeln!(out, "{},{}", format::real(*t), v)?;
        }
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "t,value")) => {}
            other => {
                return Err(Error::Parse {
                    location: format!("line {}", other.map_or(1, |(i, _)| i + 1)),
                    message: "expected header 't,value'".into(),
                })
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let bad = |m: &str| Error::Parse {
                location: format!("line {}", i + 1),
                message: m.to_string(),
            };
            let (t, v) = line.split_once(',').ok_or_else(|| bad("expected two fields"))?;
            let t: f64 = t.trim().parse().map_err(|_| bad("bad time"))?;
            let v: i64 = v.trim().parse().map_err(|_| bad("bad value"))?;
            rows.push((t, v));
        }
        let (&(start, initial), rest) = rows.split_first().ok_or_else(|| Error::Parse {
            location: "end of input".into(),
            message: "missing start row".into(),
        })?;
        StepFunction::new(start, initial, rest.iter().map(|r| r.0).collect(), rest.iter().map(|r| r.1).collect())
    }
}
