use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Obstacle star-shaped with respect to the origin, described by the range
/// of its radial function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub r_min: f64,
    pub r_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Ball,
    Annulus { r_in: f64 },
    BallMinusObstacle { obstacle: Obstacle },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPart {
    Inner,
    Outer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub d: usize,
    pub ell: f64,
    pub shape: Shape,
    pub gamma_dir: Vec<BoundaryPart>,
    pub gamma_diss: Vec<BoundaryPart>,
}

impl DomainSpec {
    pub fn new(
        d: usize,
        ell: f64,
        shape: Shape,
        gamma_dir: Vec<BoundaryPart>,
        gamma_diss: Vec<BoundaryPart>,
    ) -> Result<Self> {
        let s = Self { d, ell, shape, gamma_dir, gamma_diss };
        s.validate()?;
        Ok(s)
    }

    /// Ball of radius `ell` with dissipative boundary.
    pub fn ball(d: usize, ell: f64) -> Result<Self> {
        Self::new(d, ell, Shape::Ball, vec![], vec![BoundaryPart::Outer])
    }

    /// Annulus with Dirichlet inner circle and dissipative outer circle.
    pub fn annulus(d: usize, r_in: f64, ell: f64) -> Result<Self> {
        Self::new(d, ell, Shape::Annulus { r_in }, vec![BoundaryPart::Inner], vec![BoundaryPart::Outer])
    }

    pub fn with_obstacle(d: usize, ell: f64, obstacle: Obstacle) -> Result<Self> {
        Self::new(d, ell, Shape::BallMinusObstacle { obstacle }, vec![BoundaryPart::Inner], vec![BoundaryPart::Outer])
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDomain(m));
        if self.d != 2 && self.d != 3 {
            return bad(format!("dimension {} not in {{2, 3}}", self.d));
        }
        if !(self.ell > 0.0 && self.ell.is_finite()) {
            return bad(format!("ell = {} must be positive", self.ell));
        }
        match self.shape {
            Shape::Annulus { r_in } if !(r_in > 0.0 && r_in < self.ell) => {
                return bad(format!("annulus needs 0 < r_in < ell, got r_in = {r_in}"));
            }
            Shape::BallMinusObstacle { obstacle: o }
                if !(o.r_min > 0.0 && o.r_min <= o.r_max && o.r_max < self.ell) =>
            {
                return bad("obstacle radii must satisfy 0 < r_min <= r_max < ell".into());
            }
            _ => {}
        }
        let mut parts = vec![BoundaryPart::Outer];
        if self.shape != Shape::Ball {
            parts.push(BoundaryPart::Inner);
        }
        for p in self.gamma_dir.iter().chain(&self.gamma_diss) {
            if !parts.contains(p) {
                return bad(format!("boundary part {p:?} does not exist"));
            }
        }
        if self.gamma_dir.iter().any(|p| self.gamma_diss.contains(p)) {
            return bad("Dirichlet and dissipative boundaries overlap".into());
        }
        for p in &parts {
            let n = self.gamma_dir.iter().chain(&self.gamma_diss).filter(|q| *q == p).count();
            if n != 1 {
                return bad(format!("boundary part {p:?} must be tagged exactly once"));
            }
        }
        Ok(())
    }

    /// Smallest radius reached by the domain.
    pub fn inner_radius(&self) -> f64 {
        match self.shape {
            Shape::Ball => 0.0,
            Shape::Annulus { r_in } => r_in,
            Shape::BallMinusObstacle { obstacle } => obstacle.r_min,
        }
    }

    pub fn diss_is_outer_sphere(&self) -> bool {
        self.gamma_diss == [BoundaryPart::Outer]
    }

    /// Volume (area for `d = 2`) when known in closed form.
    pub fn measure(&self) -> Option<f64> {
        let ball = |r: f64| match self.d {
            2 => std::f64::consts::PI * r * r,
            _ => 4.0 / 3.0 * std::f64::consts::PI * r.powi(3),
        };
        match self.shape {
            Shape::Ball => Some(ball(self.ell)),
            Shape::Annulus { r_in } => Some(ball(self.ell) - ball(r_in)),
            Shape::BallMinusObstacle { .. } => None,
        }
    }
}
