export { BASE_HEADER, ResultRow, parseResultCsv } from "./csv";
export { FIGURE_KINDS, FigureKind, renderFigure } from "./figures";
