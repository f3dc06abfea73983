/**
 * Tiny DOM-free widget model.
 */
class Widget {
  /**
   * Create a widget with a label.
   * @param {string} label visible text
   */
  constructor(label) {
    this.label = label;
    this.visible = true;
  }

  /**
   * Hide the widget.
   */
  hide() {
    this.visible = false;
  }
}

/**
 * Render a list of widgets to plain text, one per line.
 * @param {Widget[]} widgets widgets to render
 * @returns {string} newline-joined labels
 */
function renderAll(widgets) {
  // skip hidden widgets entirely
  const lines = widgets.filter((w) => w.visible).map((w) => w.label);
  return lines.join("\n");
}

module.exports = { Widget, renderAll };
