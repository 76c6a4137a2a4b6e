//! Inter-atom spacing: the class-pair table and the explicit spacing
//! commands.

use crate::ast::SpaceCommand;
use crate::boxes::{BoxNode, GlueSpec};
use crate::dim::{mu_to_dim, Dim, Mu};
use crate::metrics::Metrics;
use crate::style::Style;
use crate::symbols::AtomClass;

/// Pair spacing amounts. Medium and thick vanish in script styles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSpace {
    None,
    Thin,
    Med,
    Thick,
}

/// The plain class-pair table. Rows are the left class, columns the right,
/// in class order; medium and thick entries apply in display and text only
/// (encoded by the `bool`).
const PAIR_TABLE: [[(PairSpace, bool); 8]; 8] = {
    use PairSpace::*;
    const N: (PairSpace, bool) = (None, false);
    const T: (PairSpace, bool) = (Thin, false);
    const TS: (PairSpace, bool) = (Thin, true);
    const MS: (PairSpace, bool) = (Med, true);
    const KS: (PairSpace, bool) = (Thick, true);
    [
        // right: Ord   Op   Bin  Rel  Open Close Punct Inner
        /* Ord   */ [N, T, MS, KS, N, N, N, TS],
        /* Op    */ [T, T, N, KS, N, N, N, TS],
        /* Bin   */ [MS, MS, N, N, MS, N, N, MS],
        /* Rel   */ [KS, KS, N, N, KS, N, N, KS],
        /* Open  */ [N, N, N, N, N, N, N, N],
        /* Close */ [N, T, MS, KS, N, N, N, TS],
        /* Punct */ [TS, TS, N, TS, TS, TS, TS, TS],
        /* Inner */ [TS, T, MS, KS, TS, N, TS, TS],
    ]
};

/// The glue (if any) between two atom classes at a style.
pub fn pair_glue(left: AtomClass, right: AtomClass, style: Style) -> Option<PairSpace> {
    let (space, full_only) = PAIR_TABLE[left as usize][right as usize];
    if space == PairSpace::None {
        return None;
    }
    if full_only && !style.is_full_size() {
        return None;
    }
    Some(space)
}

pub fn thin_mu() -> Mu {
    Mu::from_units(3)
}

pub fn med_mu() -> Mu {
    Mu::from_units(4)
}

pub fn thick_mu() -> Mu {
    Mu::from_units(5)
}

/// The pair space as a box item: thin is rigid, medium and thick carry
/// their plain stretch/shrink.
pub fn pair_glue_box(space: PairSpace, style: Style, metrics: &Metrics) -> BoxNode {
    let quad = metrics.quad(style);
    let to_dim = |mu: Mu| mu_to_dim(mu, quad);
    match space {
        PairSpace::None => BoxNode::kern(Dim::ZERO),
        PairSpace::Thin => BoxNode::kern(to_dim(thin_mu())),
        PairSpace::Med => BoxNode::glue(GlueSpec {
            natural: to_dim(med_mu()),
            stretch: to_dim(Mu::from_units(2)),
            stretch_order: 0,
            shrink: to_dim(Mu::from_units(4)),
            shrink_order: 0,
        }),
        PairSpace::Thick => BoxNode::glue(GlueSpec {
            natural: to_dim(thick_mu()),
            stretch: to_dim(Mu::from_units(5)),
            stretch_order: 0,
            shrink: Dim::ZERO,
            shrink_order: 0,
        }),
    }
}

/// The width contributed between two classes by the pair table.
pub fn space_between(
    left: AtomClass,
    right: AtomClass,
    style: Style,
    metrics: &Metrics,
) -> Dim {
    match pair_glue(left, right, style) {
        None => Dim::ZERO,
        Some(space) => {
            let mu = match space {
                PairSpace::None => Mu::ZERO,
                PairSpace::Thin => thin_mu(),
                PairSpace::Med => med_mu(),
                PairSpace::Thick => thick_mu(),
            };
            mu_to_dim(mu, metrics.quad(style))
        }
    }
}

/// Explicit spacing commands as box items; all are math-mode mskips except
/// the quads, which are em kerns of the current size.
pub fn explicit_space(cmd: SpaceCommand, style: Style, metrics: &Metrics) -> Vec<BoxNode> {
    let quad = metrics.quad(style);
    let to_dim = |mu: Mu| mu_to_dim(mu, quad);
    match cmd {
        SpaceCommand::Thin => vec![BoxNode::kern(to_dim(thin_mu()))],
        SpaceCommand::NegThin => vec![BoxNode::kern(-to_dim(thin_mu()))],
        SpaceCommand::Med => vec![BoxNode::glue(GlueSpec {
            natural: to_dim(med_mu()),
            stretch: to_dim(Mu::from_units(2)),
            stretch_order: 0,
            shrink: to_dim(Mu::from_units(4)),
            shrink_order: 0,
        })],
        SpaceCommand::NegMed => vec![BoxNode::glue(GlueSpec {
            natural: -to_dim(med_mu()),
            stretch: -to_dim(Mu::from_units(2)),
            stretch_order: 0,
            shrink: -to_dim(Mu::from_units(4)),
            shrink_order: 0,
        })],
        SpaceCommand::Thick => vec![BoxNode::glue(GlueSpec {
            natural: to_dim(thick_mu()),
            stretch: to_dim(Mu::from_units(5)),
            stretch_order: 0,
            shrink: Dim::ZERO,
            shrink_order: 0,
        })],
        SpaceCommand::NegThick => vec![BoxNode::glue(GlueSpec {
            natural: -to_dim(thick_mu()),
            stretch: -to_dim(Mu::from_units(5)),
            stretch_order: 0,
            shrink: Dim::ZERO,
            shrink_order: 0,
        })],
        SpaceCommand::AtComma => {
            vec![BoxNode::kern(to_dim(thin_mu().scale_decimal(0, 1, 10)))]
        }
        SpaceCommand::AtBang => {
            vec![BoxNode::kern(-to_dim(thin_mu().scale_decimal(0, 1, 10)))]
        }
        SpaceCommand::Quad => vec![BoxNode::kern(quad)],
        SpaceCommand::QQuad => vec![BoxNode::kern(quad.scale_int(2))],
        // The ratio colon is assembled by the engine: it needs atoms.
        SpaceCommand::Colon => vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ord_ord_is_zero() {
        let m = Metrics::builtin();
        assert_eq!(
            space_between(AtomClass::Ord, AtomClass::Ord, Style::TEXT, &m),
            Dim::ZERO
        );
    }

    #[test]
    fn ord_bin_is_medium_in_full_sizes_only() {
        let m = Metrics::builtin();
        let med = space_between(AtomClass::Ord, AtomClass::Bin, Style::TEXT, &m);
        assert_eq!(med, mu_to_dim(Mu::from_units(4), m.quad(Style::TEXT)));
        assert_eq!(
            space_between(AtomClass::Ord, AtomClass::Bin, Style::SCRIPT, &m),
            Dim::ZERO
        );
    }

    #[test]
    fn op_pairs_keep_thin_in_scripts() {
        let m = Metrics::builtin();
        let thin = space_between(AtomClass::Op, AtomClass::Ord, Style::SCRIPT, &m);
        assert_eq!(thin, mu_to_dim(Mu::from_units(3), m.quad(Style::SCRIPT)));
    }

    #[test]
    fn explicit_thin_space_examples() {
        let m = Metrics::builtin();
        // 3mu at a 10pt quad: trunc(3/18 * 655360) = 109226, which equals
        // the text branch's .16667em kern within half a scaled point.
        let thin = explicit_space(SpaceCommand::Thin, Style::TEXT, &m);
        assert_eq!(thin[0].width, Dim(109226));
        let at_comma = explicit_space(SpaceCommand::AtComma, Style::TEXT, &m);
        // .1\thinmuskip scans the factor as 6554/65536
        assert_eq!(at_comma[0].width, Dim(10923));
    }

    #[test]
    fn inner_behaves_like_ord_plus_thin() {
        let m = Metrics::builtin();
        let d = space_between(AtomClass::Inner, AtomClass::Ord, Style::TEXT, &m);
        assert_eq!(d, mu_to_dim(Mu::from_units(3), m.quad(Style::TEXT)));
        let d = space_between(AtomClass::Ord, AtomClass::Inner, Style::TEXT, &m);
        assert_eq!(d, mu_to_dim(Mu::from_units(3), m.quad(Style::TEXT)));
    }
}
