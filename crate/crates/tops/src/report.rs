//! Conservation reports and trajectory export.

use crate::integrate::Trajectory;
use crate::poisson::SmoothFn;
use serde::Serialize;
use std::io::Write;

/// Drift of one monitored quantity along a trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub name: String,
    pub initial: f64,
    pub max_drift: f64,
    pub t_at_max: f64,
    /// Set when the quantity is an integral only on a leaf and the
    /// trajectory starts off that leaf.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub conditional: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConservationReport {
    pub channels: Vec<ChannelReport>,
}

impl ConservationReport {
    pub fn max_drift(&self, name: &str) -> Option<f64> {
        self.channels.iter().find(|c| c.name == name).map(|c| c.max_drift)
    }

    pub fn worst(&self) -> f64 {
        self.channels.iter().map(|c| c.max_drift).fold(0.0, f64::max)
    }

    /// Worst drift over unconditional channels only.
    pub fn worst_unconditional(&self) -> f64 {
        self.channels
            .iter()
            .filter(|c| !c.conditional)
            .map(|c| c.max_drift)
            .fold(0.0, f64::max)
    }

    pub fn merge(&mut self, other: ConservationReport) {
        self.channels.extend(other.channels);
    }

    /// JSON object `{name: {initial, max_drift, t_at_max}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for c in &self.channels {
            let mut entry = serde_json::Map::new();
            entry.insert("initial".into(), c.initial.into());
            entry.insert("max_drift".into(), c.max_drift.into());
            entry.insert("t_at_max".into(), c.t_at_max.into());
            if c.conditional {
                entry.insert("conditional".into(), true.into());
            }
            map.insert(c.name.clone(), serde_json::Value::Object(entry));
        }
        serde_json::Value::Object(map)
    }
}

impl std::fmt::Display for ConservationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.channels {
            writeln!(
                f,
                "  {:<12} initial {:+.12e}  max drift {:.3e} at t = {:.3}{}",
                c.name,
                c.initial,
                c.max_drift,
                c.t_at_max,
                if c.conditional { "  [conditional: leaf violated]" } else { "" }
            )?;
        }
        Ok(())
    }
}

/// Max absolute drift of each function along the trajectory samples.
pub fn monitor(traj: &Trajectory, fns: &[SmoothFn]) -> ConservationReport {
    let mut channels = Vec::with_capacity(fns.len());
    for f in fns {
        let x0 = &traj.states[0];
        let initial = f.eval(x0);
        let conditional = match f.leaf() {
            Some(leaf) => (leaf.f)(x0).abs() > leaf.tol,
            None => false,
        };
        let mut max_drift = 0.0;
        let mut t_at_max = traj.times[0];
        for (t, x) in traj.times.iter().zip(traj.states.iter()) {
            let d = (f.eval(x) - initial).abs();
            if d > max_drift {
                max_drift = d;
                t_at_max = *t;
            }
        }
        channels.push(ChannelReport { name: f.name().to_string(), initial, max_drift, t_at_max, conditional });
    }
    ConservationReport { channels }
}

/// Writes `t`, the flattened state columns, then monitor channels, with 17
/// significant digits (round-trip exact for doubles).
pub fn write_csv<W: Write>(
    out: &mut W,
    traj: &Trajectory,
    monitors: &[(String, Vec<f64>)],
) -> std::io::Result<()> {
    let names = traj.kind.coord_names();
    write!(out, "t")?;
    for n in &names {
        write!(out, ",{n}")?;
    }
    for (n, _) in monitors {
        write!(out, ",{n}")?;
    }
    writeln!(out)?;
    for (i, (t, x)) in traj.times.iter().zip(traj.states.iter()).enumerate() {
        write!(out, "{}", fmt_g17(*t))?;
        for v in x.flatten().iter() {
            write!(out, ",{}", fmt_g17(*v))?;
        }
        for (_, col) in monitors {
            write!(out, ",{}", fmt_g17(col[i]))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// 17 significant digits.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::Trajectory;
    use crate::poisson::{PhaseKind, PhasePoint, SmoothFn};
    use crate::Vec3;

    fn tiny_traj() -> Trajectory {
        let states: Vec<PhasePoint> = (0..3)
            .map(|i| PhasePoint::e3(Vec3::new(i as f64, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0)))
            .collect();
        Trajectory { kind: PhaseKind::E3, times: vec![0.0, 1.0, 2.0], states }
    }

    #[test]
    fn monitor_constant_and_drifting() {
        let traj = tiny_traj();
        let konst = SmoothFn::new("one", |_: &PhasePoint| 1.0);
        let m1 = SmoothFn::new("M1", |x: &PhasePoint| match x {
            PhasePoint::E3 { m, .. } => m.x,
            _ => unreachable!(),
        });
        let rep = monitor(&traj, &[konst, m1]);
        assert_eq!(rep.max_drift("one"), Some(0.0));
        assert_eq!(rep.max_drift("M1"), Some(2.0));
        assert_eq!(rep.channels[1].t_at_max, 2.0);
    }

    #[test]
    fn csv_round_trip_digits() {
        let traj = tiny_traj();
        let mut buf = Vec::new();
        write_csv(&mut buf, &traj, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,M1,M2,M3,G1,G2,G3");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
        // value formatting is round-trip exact
        let v: f64 = fmt_g17(std::f64::consts::PI).parse().unwrap();
        assert_eq!(v, std::f64::consts::PI);
    }
}
