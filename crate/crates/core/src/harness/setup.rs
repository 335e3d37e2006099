use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distortion::{DvMethod, Method};
use crate::Error;

/// Rhythmic block appended after the distorted views.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extra {
    Sq,
    Fake,
}

impl Extra {
    pub fn method(self) -> Method {
        match self {
            Extra::Sq => Method::Sq,
            Extra::Fake => Method::Fake,
        }
    }
}

/// A feature combination: base features, any distorted views, and
/// optionally SQ-grams or their FAKE control.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Setup {
    pub dv: Vec<DvMethod>,
    pub extra: Option<Extra>,
}

impl Setup {
    pub fn base() -> Self {
        Setup {
            dv: Vec::new(),
            extra: None,
        }
    }

    pub fn with_dv(mut self, method: DvMethod) -> Self {
        self.dv.push(method);
        self
    }

    pub fn all_dv(mut self) -> Self {
        self.dv = DvMethod::ALL.to_vec();
        self
    }

    pub fn with_extra(mut self, extra: Extra) -> Self {
        self.extra = Some(extra);
        self
    }

    pub fn is_all_dv(&self) -> bool {
        self.dv == DvMethod::ALL
    }

    /// Whether the grid includes the selection ratio.
    pub fn selects_features(&self) -> bool {
        self.extra.is_some()
    }

    /// The same setup without its SQ / FAKE block.
    pub fn baseline(&self) -> Option<Setup> {
        self.extra.map(|_| Setup {
            dv: self.dv.clone(),
            extra: None,
        })
    }

    /// Every pairing reported in the comparison tables.
    pub fn standard() -> Vec<Setup> {
        let mut out = vec![Setup::base(), Setup::base().with_extra(Extra::Sq)];
        for m in DvMethod::ALL {
            out.push(Setup::base().with_dv(m));
            out.push(Setup::base().with_dv(m).with_extra(Extra::Sq));
        }
        out.push(Setup::base().all_dv());
        out.push(Setup::base().all_dv().with_extra(Extra::Sq));
        out.push(Setup::base().all_dv().with_extra(Extra::Fake));
        out
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.extra == Some(Extra::Fake) && !self.is_all_dv() {
            return Err(Error::Config(format!(
                "setup `{self}`: FAKE is only paired with ALLDV"
            )));
        }
        let mut seen = self.dv.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.dv.len() {
            return Err(Error::Config(format!("setup `{self}` repeats a distorted view")));
        }
        Ok(())
    }
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BFs")?;
        if self.is_all_dv() {
            f.write_str("+ALLDV")?;
        } else {
            for m in &self.dv {
                write!(f, "+{}", Method::Dv(*m))?;
            }
        }
        if let Some(e) = self.extra {
            write!(f, "+{}", e.method())?;
        }
        Ok(())
    }
}

impl FromStr for Setup {
    type Err = Error;

    /// Parses names like `BFs+DVMA+SQ` or `BFs+ALLDV+FAKE` (case-insensitive,
    /// spaces ignored).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parts = compact.split('+');
        if !parts.next().is_some_and(|p| p.eq_ignore_ascii_case("bfs")) {
            return Err(Error::Config(format!("setup `{s}` must start with BFs")));
        }
        let mut setup = Setup::base();
        for part in parts {
            if setup.extra.is_some() {
                return Err(Error::Config(format!("setup `{s}`: SQ/FAKE must come last")));
            }
            if part.eq_ignore_ascii_case("alldv") {
                setup.dv.extend(DvMethod::ALL);
                continue;
            }
            match part.parse::<Method>()? {
                Method::Dv(m) => setup.dv.push(m),
                Method::Sq => setup.extra = Some(Extra::Sq),
                Method::Fake => setup.extra = Some(Extra::Fake),
            }
        }
        setup.validate()?;
        Ok(setup)
    }
}
