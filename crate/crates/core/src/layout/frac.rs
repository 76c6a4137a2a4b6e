//! Generalized fractions and continued fractions.

use crate::ast::{CfracAlign, ContinuedFraction, FracThickness, Fraction};
use crate::boxes::{hpack_natural, BoxKind, BoxNode, Child};
use crate::dim::Dim;
use crate::error::LayoutError;
use crate::style::Style;

use super::{layout_list, sized_delim, Ctx};

/// The rule thickness a fraction uses: the font rule by default, or a
/// multiple of the `ex` constant.
fn rule_thickness(ctx: &Ctx, thickness: FracThickness, style: Style) -> Dim {
    match thickness {
        FracThickness::Default => ctx.metrics.rule_thickness(style),
        FracThickness::ExMilli(milli) => ctx.constants.ex.scale_frac(milli, 1000),
    }
}

pub fn layout_fraction(
    ctx: &Ctx,
    f: &Fraction,
    outer_style: Style,
) -> Result<BoxNode, LayoutError> {
    let style = match f.style_force {
        Some(level) => outer_style.with_level(level),
        None => outer_style,
    };
    let num = layout_list(ctx, &f.num, style.num_style())?;
    let den = layout_list(ctx, &f.den, style.denom_style())?;
    let theta = rule_thickness(ctx, f.thickness, style);
    let body = fraction_body(ctx, num, den, theta, style);
    // Delimiters (or null-delimiter kerns) wrap the body.
    let delim_size = if style.is_display() {
        ctx.metrics.param(|p| p.delim1, style)
    } else {
        ctx.metrics.param(|p| p.delim2, style)
    };
    let mut items = Vec::new();
    match f.delims {
        Some((l, r)) => {
            match sized_delim(ctx, l, delim_size, style) {
                Some(b) => items.push(fixed_delim(b, delim_size, ctx, style)),
                None => items.push(BoxNode::kern(ctx.constants.null_delimiter_space)),
            }
            items.push(body);
            match sized_delim(ctx, r, delim_size, style) {
                Some(b) => items.push(fixed_delim(b, delim_size, ctx, style)),
                None => items.push(BoxNode::kern(ctx.constants.null_delimiter_space)),
            }
        }
        None => {
            items.push(BoxNode::kern(ctx.constants.null_delimiter_space));
            items.push(body);
            items.push(BoxNode::kern(ctx.constants.null_delimiter_space));
        }
    }
    Ok(hpack_natural(items))
}

fn fixed_delim(mut b: BoxNode, total: Dim, ctx: &Ctx, style: Style) -> BoxNode {
    let axis = ctx.metrics.axis_height(style);
    let total = total.max(b.height + b.depth);
    let h = total.divide(2) + axis;
    b.height = h;
    b.depth = total - h;
    b
}

/// The bare numerator-over-denominator stack: shifts from the numerator
/// parameters, clearance against the rule (or direct clearance when there
/// is no rule), rule on the axis.
pub fn fraction_body(ctx: &Ctx, num: BoxNode, den: BoxNode, theta: Dim, style: Style) -> BoxNode {
    let m = ctx.metrics;
    let axis = m.axis_height(style);
    let display = style.is_display();
    let mut u = if display {
        m.param(|p| p.num1, style)
    } else if theta.is_zero() {
        m.param(|p| p.num3, style)
    } else {
        m.param(|p| p.num2, style)
    };
    let mut v = if display {
        m.param(|p| p.denom1, style)
    } else {
        m.param(|p| p.denom2, style)
    };
    let default_rule = m.rule_thickness(style);
    if theta.is_zero() {
        // no rule: direct clearance between numerator and denominator
        let phi = if display {
            default_rule.scale_int(7)
        } else {
            default_rule.scale_int(3)
        };
        let gap = (u - num.depth) - (den.height - v);
        if gap < phi {
            let add = (phi - gap).divide(2);
            u += add;
            v += phi - gap - add;
        }
    } else {
        let phi = if display { theta.scale_int(3) } else { theta };
        // clearance between numerator bottom and rule top
        let gap_up = (u - num.depth) - (axis + theta.divide(2));
        if gap_up < phi {
            u += phi - gap_up;
        }
        let gap_dn = (axis - theta.divide(2)) - (den.height - v);
        if gap_dn < phi {
            v += phi - gap_dn;
        }
    }
    let width = num.width.max(den.width);
    let center = |b: BoxNode| -> (BoxNode, Dim) {
        let dx = (width - b.width).divide(2);
        (b, dx)
    };
    let (num, num_dx) = center(num);
    let (den, den_dx) = center(den);
    let mut children = vec![
        Child {
            dx: num_dx,
            dy: u,
            node: num.clone(),
        },
        Child {
            dx: den_dx,
            dy: -v,
            node: den.clone(),
        },
    ];
    if !theta.is_zero() {
        children.push(Child {
            dx: Dim::ZERO,
            dy: axis - theta.divide(2) + theta,
            node: BoxNode::rule(width, theta, Dim::ZERO),
        });
    }
    BoxNode {
        kind: BoxKind::VBox,
        width,
        height: u + num.height,
        depth: v + den.depth,
        children,
        glue: None,
        glyph: None,
        note: None,
    }
}

/// Continued fractions: each level is a display-style fraction whose
/// numerator row carries a strut; the variants flush rows left or right.
pub fn layout_cfrac(
    ctx: &Ctx,
    c: &ContinuedFraction,
    style: Style,
) -> Result<BoxNode, LayoutError> {
    let display = Style::DISPLAY.with_level(crate::style::StyleLevel::Display);
    let rows: Vec<BoxNode> = c
        .rows
        .iter()
        .map(|row| -> Result<BoxNode, LayoutError> {
            let body = layout_list(ctx, row, display)?;
            Ok(hpack_natural(vec![ctx.strut(), body]))
        })
        .collect::<Result<_, _>>()?;
    let theta = ctx.metrics.rule_thickness(style);
    let align = c.align;
    let mut iter = rows.into_iter().rev();
    let Some(mut acc) = iter.next() else {
        return Ok(hpack_natural(vec![]));
    };
    for num in iter {
        let body = cfrac_level(ctx, num, acc, theta, align);
        // each closing level retracts the trailing null delimiter space
        acc = hpack_natural(vec![
            BoxNode::kern(ctx.constants.null_delimiter_space),
            body,
            BoxNode::kern(ctx.constants.null_delimiter_space),
            BoxNode::kern(-ctx.constants.null_delimiter_space),
        ]);
    }
    Ok(acc)
}

fn cfrac_level(
    ctx: &Ctx,
    num: BoxNode,
    den: BoxNode,
    theta: Dim,
    align: CfracAlign,
) -> BoxNode {
    let style = Style::DISPLAY;
    let width = num.width.max(den.width);
    let pad = |b: BoxNode| -> BoxNode {
        let w = b.width;
        match align {
            CfracAlign::Center => b,
            CfracAlign::Left => hpack_natural(vec![b, BoxNode::kern(width - w)]),
            CfracAlign::Right => hpack_natural(vec![BoxNode::kern(width - w), b]),
        }
    };
    fraction_body(ctx, pad(num), pad(den), theta, style)
}
