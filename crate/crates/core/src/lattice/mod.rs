mod disc;
pub mod fixtures;
mod gram;
mod torsion;

pub use disc::{enumerate_overlattices, reduce_mod, smith, DiscGroup, Overlattice};
pub use gram::{dynkin_edges, minuscule_node, root_lattice, IntegralLattice};
pub use torsion::{
    check_splitting_at_fiber, check_splitting_valuation, comp_add, comp_order, contribution,
    group_name, subgroup_structure, torsion_group, Comp, Slot, SplitWitness, TorsionGroup,
};
