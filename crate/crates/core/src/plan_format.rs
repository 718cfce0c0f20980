//! Line-based plan files.
//!
//! ```text
//! 4 2 3 1 0
//! O*
//! G
//! ```
//!
//! The header is `N M c_star c_s epsilon`; each following line holds one
//! primitive mnemonic (`G`, `OS`, `O*`). Blank lines are ignored.

use crate::cost::{format_cost, parse_cost};
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;
use crate::statevec::{Primitive, Schedule};

#[derive(Debug, Clone, PartialEq)]
pub struct PlanFile {
    pub instance: ProblemInstance,
    pub schedule: Schedule,
}

impl PlanFile {
    pub fn new(instance: ProblemInstance, schedule: Schedule) -> Self {
        Self { instance, schedule }
    }

    pub fn to_text(&self) -> String {
        let i = &self.instance;
        let mut out = format!(
            "{} {} {} {} {}\n",
            i.n(),
            i.m(),
            format_cost(&i.c_star()),
            format_cost(&i.c_s()),
            i.epsilon()
        );
        for p in self.schedule.steps() {
            out.push_str(p.mnemonic());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let perr = |message: String| Error::Parse { line: hline + 1, message };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(perr(format!("header needs 5 fields `N M c_star c_s epsilon`, found {}", fields.len())));
        }
        let n: usize = fields[0].parse().map_err(|_| perr(format!("bad N {:?}", fields[0])))?;
        let m: usize = fields[1].parse().map_err(|_| perr(format!("bad M {:?}", fields[1])))?;
        let c_star = parse_cost(fields[2]).map_err(|e| perr(e.to_string()))?;
        let c_s = parse_cost(fields[3]).map_err(|e| perr(e.to_string()))?;
        let epsilon: f64 = fields[4].parse().map_err(|_| perr(format!("bad epsilon {:?}", fields[4])))?;
        let instance = ProblemInstance::new(n, m, c_star, c_s, epsilon).map_err(|e| perr(e.to_string()))?;

        let mut schedule = Schedule::new();
        for (idx, line) in lines {
            let token = line.trim();
            let p = Primitive::from_mnemonic(token)
                .ok_or_else(|| Error::Parse { line: idx + 1, message: format!("unknown primitive {token:?}") })?;
            schedule.push(p);
        }
        Ok(Self { instance, schedule })
    }
}
