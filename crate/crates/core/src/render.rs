//! The rendering front end: parse, configure, lay out, emit.

use thiserror::Error;

use crate::ast::{MathList, Node};
use crate::boxes::{hpack_to, BoxNode, GlueSpec};
use crate::config::{DisplayConfig, EnvConfig};
use crate::constants::LayoutConstants;
use crate::dim::Dim;
use crate::error::{ConfigError, LayoutError, ParseError};
use crate::layout::{layout_list, Ctx};
use crate::metrics::Metrics;
use crate::parser::parse_expression;
use crate::style::Style;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Boxes,
    MathML,
    Svg,
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// One render request: an expression, a mode, a backend, and the
/// configuration it runs under.
#[derive(Debug, Clone)]
pub struct RenderRequest {
    pub backend: Backend,
    pub display_mode: bool,
    pub display: DisplayConfig,
    pub constants_overrides: Option<String>,
    pub metrics_text: Option<String>,
}

impl Default for RenderRequest {
    fn default() -> RenderRequest {
        RenderRequest {
            backend: Backend::Boxes,
            display_mode: true,
            display: DisplayConfig::default(),
            constants_overrides: None,
            metrics_text: None,
        }
    }
}

/// Parses and lays out one expression under the request's configuration.
pub fn layout_expression(
    input: &str,
    request: &RenderRequest,
) -> Result<(BoxNode, MathList, Metrics, LayoutConstants, DisplayConfig), RenderError> {
    let metrics = match &request.metrics_text {
        Some(text) => Metrics::parse(text).map_err(|e| {
            RenderError::Config(ConfigError::BadEntry {
                line: 0,
                reason: e.to_string(),
            })
        })?,
        None => Metrics::builtin(),
    };
    let mut constants = LayoutConstants::new(&metrics);
    if let Some(text) = &request.constants_overrides {
        constants.apply_config(text, &metrics)?;
    }
    let (list, env_config) = parse_expression(input)?;
    let mut display = request.display.clone();
    env_config.apply(&mut display, &mut constants, &metrics)?;
    let boxnode = layout_top(
        &list,
        &env_config,
        &metrics,
        &constants,
        &display,
        request.display_mode,
    )?;
    Ok((boxnode, list, metrics, constants, display))
}

fn layout_top(
    list: &MathList,
    env_config: &EnvConfig,
    metrics: &Metrics,
    constants: &LayoutConstants,
    display: &DisplayConfig,
    display_mode: bool,
) -> Result<BoxNode, LayoutError> {
    let mut ctx = Ctx::new(metrics, constants, display);
    ctx.limits = env_config.limits;
    ctx.display_mode = display_mode;
    let is_env = matches!(list.0.as_slice(), [Node::DisplayEnv(_)]);
    if display_mode && !is_env {
        // a bare display equation: centered on the display width
        let content = layout_list(&ctx, list, Style::DISPLAY)?;
        let centering = || BoxNode::glue(GlueSpec::stretchy(Dim::ZERO, Dim::from_pt(1000)));
        return Ok(hpack_to(
            display.display_width,
            vec![centering(), ctx.strut(), content, centering()],
        ));
    }
    if display_mode {
        layout_list(&ctx, list, Style::DISPLAY)
    } else {
        layout_list(&ctx, list, Style::TEXT)
    }
}

/// Renders one expression to the requested backend.
pub fn render_expression(input: &str, request: &RenderRequest) -> Result<String, RenderError> {
    let (boxnode, list, metrics, constants, display) = layout_expression(input, request)?;
    Ok(match request.backend {
        Backend::Boxes => boxnode.dump(),
        Backend::MathML => crate::mathml::render_mathml(&list, &display, request.display_mode),
        Backend::Svg => {
            let _ = (metrics, constants);
            crate::svg::render_svg(&boxnode)
        }
    })
}

/// The deterministic box dump (one line per node, integers only).
pub fn render_boxes(boxnode: &BoxNode) -> String {
    boxnode.dump()
}
