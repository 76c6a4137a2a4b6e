//! Square roots and general radicals with degree adjustments.

use crate::ast::Radical;
use crate::boxes::{hpack_natural, BoxKind, BoxNode, Child};
use crate::dim::{Dim, Mu};
use crate::error::LayoutError;
use crate::metrics::{Family, GlyphId};
use crate::style::Style;

use super::{layout_list, Ctx};

/// A plain `\sqrt`: radicand set cramped, rule clearance above it, the sign
/// grown to cover.
pub fn sqrt_box(ctx: &Ctx, radicand: BoxNode, style: Style) -> BoxNode {
    let m = ctx.metrics;
    let theta = m.rule_thickness(style);
    let mut psi = theta
        + if style.is_display() {
            m.x_height(style).scale_frac(1, 4)
        } else {
            theta.scale_frac(1, 4)
        };
    let target = radicand.height + radicand.depth + psi + theta;
    let sign_id = GlyphId::new(Family::Ex, 0x70);
    let g = m.glyph(sign_id, style);
    let sign_total = (g.height + g.depth).max(target);
    // excess vertical room widens the clearance, as the rules do
    let excess = sign_total - target;
    if excess > Dim::ZERO {
        psi += excess.divide(2).min(excess);
    }
    let rule_y = radicand.height + psi;
    let sign = BoxNode::glyph(
        sign_id,
        '\u{221A}',
        g.width,
        rule_y + theta,
        sign_total - (rule_y + theta),
    );
    let rule = BoxNode::rule(radicand.width, theta, Dim::ZERO);
    let width = sign.width + radicand.width;
    let height = rule_y + theta;
    let depth = radicand.depth.max(sign.depth);
    BoxNode {
        kind: BoxKind::HBox,
        width,
        height,
        depth,
        children: vec![
            Child {
                dx: Dim::ZERO,
                dy: Dim::ZERO,
                node: sign.clone(),
            },
            Child {
                dx: sign.width,
                dy: rule_y,
                node: hollow_rule_carrier(rule, radicand),
            },
        ],
        glue: None,
        glyph: None,
        note: None,
    }
}

/// The radicand with its overline rule, packaged so the hbox width
/// invariant holds: the rule is a zero-advance overlay.
fn hollow_rule_carrier(rule: BoxNode, radicand: BoxNode) -> BoxNode {
    let w = rule.width;
    let rad_h = radicand.height;
    let rad_d = radicand.depth;
    let carrier = hpack_natural(vec![rule, BoxNode::kern(-w), radicand]);
    let mut carrier = carrier;
    carrier.height = rad_h;
    carrier.depth = rad_d;
    carrier
}

pub fn layout_radical(ctx: &Ctx, r: &Radical, style: Style) -> Result<BoxNode, LayoutError> {
    let radicand = layout_list(ctx, &r.radicand, style.cramp())?;
    let sqrt = sqrt_box(ctx, radicand, style);
    let Some(degree) = &r.degree else {
        if r.uproot == 0 && r.leftroot == 0 {
            return Ok(sqrt);
        }
        return Ok(root_with_degree(
            ctx,
            sqrt,
            BoxNode::phantom(Dim::ZERO, Dim::ZERO, Dim::ZERO),
            r.uproot,
            r.leftroot,
            style,
        ));
    };
    let degree_box = layout_list(ctx, degree, Style::SCRIPT_SCRIPT)?;
    Ok(root_with_degree(
        ctx,
        sqrt,
        degree_box,
        r.uproot,
        r.leftroot,
        style,
    ))
}

/// Places the degree: raised 0.6 of (height − depth of the sqrt box, plus
/// 1.667 times the width of an `uproot`-mu kern), between a 5mu−leftroot
/// kern before and a leftroot−10mu kern after.
fn root_with_degree(
    ctx: &Ctx,
    sqrt: BoxNode,
    degree: BoxNode,
    uproot: i64,
    leftroot: i64,
    style: Style,
) -> BoxNode {
    let mut d = sqrt.height - sqrt.depth;
    let uproot_kern = ctx.mu_dim(Mu::from_units(uproot), style);
    d += uproot_kern.scale_frac(1667, 1000);
    let raise = d.scale_frac(6, 10);
    let before = ctx.mu_dim(Mu::from_units(5 - leftroot), style);
    let after = ctx.mu_dim(Mu::from_units(leftroot - 10), style);
    hpack_natural(vec![
        BoxNode::kern(before),
        degree.raised(raise),
        BoxNode::kern(after),
        sqrt,
    ])
}
