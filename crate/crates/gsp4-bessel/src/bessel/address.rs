//! Double coset addresses `h(l,m) s` and `h(l,0) W_w s1 s`.

use std::fmt;

use crate::error::{Error, Result};
use crate::grp::{h_raw, s1, w_mat, FMat, Weyl};
use crate::padic::{qi, Case, FieldData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WTag {
    None,
    W0,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetAddress {
    pub l: i64,
    pub m: i64,
    pub wtag: WTag,
    /// The full Weyl word when `wtag` is `None`; otherwise the `W^(1)` part
    /// following `s1`.
    pub stag: Weyl,
}

impl CosetAddress {
    pub fn plain(l: i64, m: i64, stag: Weyl) -> CosetAddress {
        CosetAddress { l, m, wtag: WTag::None, stag }
    }

    pub fn tagged(l: i64, wtag: WTag, stag: Weyl) -> CosetAddress {
        CosetAddress { l, m: 0, wtag, stag }
    }

    pub fn validate(&self, fd: &FieldData) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidAddress(format!("{}: {}", self, why)));
        if self.m < 0 {
            return bad("m < 0");
        }
        match self.wtag {
            WTag::None => {
                if self.m == 0 && !self.stag.in_w1() {
                    return bad("m = 0 needs s in W^(1)");
                }
            }
            WTag::W0 | WTag::Plus | WTag::Minus => {
                if self.m != 0 {
                    return bad("W-tagged addresses have m = 0");
                }
                if !self.stag.in_w1() {
                    return bad("W-tagged addresses need s in W^(1)");
                }
                let want = if self.wtag == WTag::W0 { Case::Ramified } else { Case::Split };
                if fd.case != want {
                    return bad("tag does not fit the case of L");
                }
            }
        }
        Ok(())
    }

    /// The residue `w` of `W_w`, as an integer in `0..p`.
    pub fn w_residue(&self, fd: &FieldData) -> Option<u64> {
        match self.wtag {
            WTag::None => None,
            WTag::W0 => fd.w0,
            WTag::Plus => fd.split_roots.map(|r| r.0),
            WTag::Minus => fd.split_roots.map(|r| r.1),
        }
    }

    pub fn frame(&self, fd: &FieldData) -> Result<FMat> {
        self.validate(fd)?;
        let h = h_raw(fd.p, self.l, self.m);
        Ok(match self.w_residue(fd) {
            None => h.mul(&self.stag.matrix()),
            Some(w) => h.mul(&w_mat(&qi(w as i64))).mul(&s1()).mul(&self.stag.matrix()),
        })
    }

    /// All valid addresses with `l` in `lr` and `m` in `0..=mmax`.
    pub fn sweep(fd: &FieldData, lr: std::ops::RangeInclusive<i64>, mmax: i64) -> Vec<CosetAddress> {
        let mut out = Vec::new();
        for l in lr {
            for m in 0..=mmax {
                for s in Weyl::ALL {
                    let a = CosetAddress::plain(l, m, s);
                    if a.validate(fd).is_ok() {
                        out.push(a);
                    }
                }
            }
            for t in [WTag::W0, WTag::Plus, WTag::Minus] {
                for s in Weyl::W1 {
                    let a = CosetAddress::tagged(l, t, s);
                    if a.validate(fd).is_ok() {
                        out.push(a);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for CosetAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.wtag {
            WTag::None => return write!(f, "h({},{})·{}", self.l, self.m, self.stag.name()),
            WTag::W0 => "w0",
            WTag::Plus => "+",
            WTag::Minus => "-",
        };
        write!(f, "h({},0)·W{}·s1·{}", self.l, w, self.stag.name())
    }
}

fn perr(msg: &str) -> Error {
    Error::InvalidAddress(msg.to_string())
}

/// Parses the printed form.  `·`, `*` and `.` are accepted as separators.
pub fn parse_address(s: &str) -> Result<CosetAddress> {
    let norm = s.replace(['*', '.'], "·");
    let parts: Vec<&str> = norm.split('·').map(str::trim).collect();
    let head = parts.first().ok_or_else(|| perr("empty address"))?;
    let inner = head
        .strip_prefix("h(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr("expected h(l,m)"))?;
    let (l, m) = inner.split_once(',').ok_or_else(|| perr("expected h(l,m)"))?;
    let l: i64 = l.trim().parse().map_err(|_| perr("bad l"))?;
    let m: i64 = m.trim().parse().map_err(|_| perr("bad m"))?;
    match parts.len() {
        1 => Ok(CosetAddress::plain(l, m, Weyl::E)),
        2 => {
            let s = Weyl::parse(parts[1]).ok_or_else(|| perr("unknown Weyl word"))?;
            Ok(CosetAddress::plain(l, m, s))
        }
        3 | 4 => {
            let wtag = match parts[1] {
                "Ww0" => WTag::W0,
                "W+" => WTag::Plus,
                "W-" => WTag::Minus,
                _ => return Err(perr("expected W{w0|+|-}")),
            };
            if parts[2] != "s1" {
                return Err(perr("expected s1 after W"));
            }
            let s = if parts.len() == 4 {
                Weyl::parse(parts[3]).ok_or_else(|| perr("unknown Weyl word"))?
            } else {
                Weyl::E
            };
            if m != 0 {
                return Err(perr("W-tagged addresses have m = 0"));
            }
            Ok(CosetAddress::tagged(l, wtag, s))
        }
        _ => Err(perr("too many factors")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::build_field_data;

    #[test]
    fn print_parse_round_trip() {
        for fd in [build_field_data(5, 5, 0, 1).unwrap(), build_field_data(5, 0, 1, 1).unwrap()] {
            for a in CosetAddress::sweep(&fd, -1..=1, 2) {
                assert_eq!(parse_address(&a.to_string()).unwrap(), a);
            }
        }
        assert_eq!(parse_address("h(2,1)*1").unwrap(), CosetAddress::plain(2, 1, Weyl::E));
        assert!(parse_address("h(2,1)·s3").is_err());
    }

    #[test]
    fn validity() {
        let fd = build_field_data(3, 1, 0, 1).unwrap();
        assert!(CosetAddress::plain(0, 0, Weyl::S1).validate(&fd).is_err());
        assert!(CosetAddress::plain(0, 1, Weyl::S1).validate(&fd).is_ok());
        assert!(CosetAddress::tagged(0, WTag::W0, Weyl::E).validate(&fd).is_err());
        // inert: 4 m=0 frames plus 8 per m > 0
        assert_eq!(CosetAddress::sweep(&fd, 0..=0, 2).len(), 20);
        let fd = build_field_data(5, 0, 1, 1).unwrap();
        assert_eq!(CosetAddress::sweep(&fd, 0..=0, 0).len(), 12);
    }
}
