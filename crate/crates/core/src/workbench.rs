//! Shared setup: the hexagon model over `GF(q)`, its classification, the
//! geometries built on it and, at `q = 2`, the groups acting on them.

use crate::amalgam::FiniteGroup;
use crate::error::{Error, Result};
use crate::finfield::FiniteField;
use crate::hexagon::{Census, Classification, HexagonModel};
use crate::incidence::{build_gamma, Gamma, IncidenceGeometry};
use crate::permgroup::{hexagon_stabilizer, sp6_generators, PermGroup, ShadowAction};
use crate::projspace::DEFAULT_ENUMERATION_BUDGET;

pub struct Workbench {
    pub model: HexagonModel,
    pub cls: Classification,
}

impl Workbench {
    pub fn new(q: u32) -> Result<Self> {
        Self::with_budget(q, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn with_budget(q: u32, budget: u64) -> Result<Self> {
        let field = FiniteField::with_order(q)?;
        let model = HexagonModel::build_with_budget(&field, budget)?;
        let cls = Classification::build_with_budget(&model, budget)?;
        Ok(Workbench { model, cls })
    }

    pub fn q(&self) -> usize {
        self.model.q()
    }

    pub fn census(&self) -> Census {
        self.cls.census(&self.model)
    }

    pub fn gamma(&self, variant: u8) -> Result<Gamma> {
        build_gamma(variant, &self.model, &self.cls)
    }

    /// `Sp6(2)` and its hexagon stabiliser `G2(2)`; only for `q = 2`.
    pub fn groups(&self) -> Result<Groups> {
        let sp = sp6_generators(&self.model)?;
        let stab = hexagon_stabilizer(&sp, &self.model);
        let elements = FiniteGroup::from_group(&stab.group)?;
        Ok(Groups { sp, g2: stab.group, orbit_length: stab.orbit_length, elements })
    }
}

pub struct Groups {
    pub sp: PermGroup,
    /// `G2(2)` acting on the points of `PG(5,2)`.
    pub g2: PermGroup,
    /// Length of the `Sp6(2)`-orbit of the hexagon line set.
    pub orbit_length: usize,
    pub elements: FiniteGroup,
}

impl Groups {
    /// The action of `G2(2)` on the elements of a geometry whose points come
    /// first, extended through point shadows.
    pub fn action_on(&self, geo: &IncidenceGeometry) -> Result<(PermGroup, ShadowAction)> {
        let n = self.g2.degree();
        if geo.count_of_type(1) != n {
            return Err(Error::Domain("geometry points do not match the group domain".into()));
        }
        let shadow = ShadowAction::new(geo, n)?;
        let action = shadow.extend_group(&self.g2)?;
        Ok((action, shadow))
    }
}
