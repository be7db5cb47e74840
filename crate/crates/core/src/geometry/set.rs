use serde::{Deserialize, Serialize};

use super::{Component, GeometryError};
use crate::Point;

/// A compact plane set `L = K_0 ∪ … ∪ K_m` with pairwise disjoint components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Component>", into = "Vec<Component>")]
pub struct CompactSet {
    components: Vec<Component>,
}

impl TryFrom<Vec<Component>> for CompactSet {
    type Error = GeometryError;

    fn try_from(components: Vec<Component>) -> Result<Self, Self::Error> {
        CompactSet::new(components)
    }
}

impl From<CompactSet> for Vec<Component> {
    fn from(set: CompactSet) -> Self {
        set.components
    }
}

impl CompactSet {
    pub fn new(components: Vec<Component>) -> Result<Self, GeometryError> {
        if components.is_empty() {
            return Err(GeometryError::EmptySet);
        }
        for c in &components {
            c.validate()?;
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if components[i].gap(&components[j]) <= 0.0 {
                    return Err(GeometryError::Overlap(i, j));
                }
            }
        }
        Ok(CompactSet { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &Component {
        &self.components[j]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Indices of components with nonempty interior.
    pub fn fat_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.components[i].has_interior())
            .collect()
    }

    pub fn distance(&self, z: Point) -> f64 {
        self.components
            .iter()
            .map(|c| c.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// `dist(z, L ∖ K_j)`; infinite for a one-component set.
    pub fn distance_excluding(&self, j: usize, z: Point) -> f64 {
        self.components
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, c)| c.distance(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the component nearest to `z`.
    pub fn nearest_component(&self, z: Point) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, c) in self.components.iter().enumerate() {
            let d = c.distance(z);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Smallest pairwise component gap; infinite for one component.
    pub fn min_gap(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.min(self.components[i].gap(&self.components[j]));
            }
        }
        best
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in &self.components {
            let (a, b) = c.bounding_box();
            lo.re = lo.re.min(a.re);
            lo.im = lo.im.min(a.im);
            hi.re = hi.re.max(b.re);
            hi.im = hi.im.max(b.im);
        }
        (lo, hi)
    }

    /// Diameter of the bounding box; an upper bound for the set diameter.
    pub fn extent(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Boundary nodes of every component, tagged by component index.
    pub fn sample_boundary(&self, density: f64) -> Vec<(usize, Point)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.sample_boundary(density).into_iter().map(move |z| (i, z)))
            .collect()
    }

    /// Image under the similarity `z ↦ scale·z + shift`.
    pub fn transformed(&self, scale: Point, shift: Point) -> CompactSet {
        CompactSet {
            components: self
                .components
                .iter()
                .map(|c| c.transformed(scale, shift))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlapping_components() {
        let a = Component::disk(Point::new(0.0, 0.0), 1.0).unwrap();
        let b = Component::disk(Point::new(1.5, 0.0), 1.0).unwrap();
        assert!(matches!(CompactSet::new(vec![a, b]), Err(GeometryError::Overlap(0, 1))));
        assert!(matches!(CompactSet::new(vec![]), Err(GeometryError::EmptySet)));
    }

    #[test]
    fn distances_and_gaps() {
        let set = CompactSet::new(vec![
            Component::disk(Point::new(0.0, 0.0), 1.0).unwrap(),
            Component::point(Point::new(2.0, 0.0)).unwrap(),
        ])
        .unwrap();
        assert_eq!(set.min_gap(), 1.0);
        assert_eq!(set.distance_excluding(0, Point::new(0.0, 0.0)), 2.0);
        assert_eq!(set.fat_indices(), vec![0]);
        assert_eq!(set.nearest_component(Point::new(1.9, 0.0)), 1);
    }
}
