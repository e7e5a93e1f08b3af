#include "postedit/export.hpp"

#include <algorithm>

namespace postedit {

namespace {

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string latex_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      case '$': out += "\\$"; break;
      case '&': out += "\\&"; break;
      case '#': out += "\\#"; break;
      case '%': out += "\\%"; break;
      case '_': out += "\\_"; break;
      case '^': out += "\\textasciicircum{}"; break;
      case '~': out += "\\textasciitilde{}"; break;
      default: out += c;
    }
  }
  return out;
}

std::string_view latex_macro(Provenance p) {
  switch (p) {
    case Provenance::GlobalReplacement: return "\\globalrepl";
    case Provenance::DictionaryReplacement: return "\\dictrepl";
    case Provenance::TmReplacement: return "\\tmrepl";
  }
  return "\\globalrepl";
}

// Walks the text, calling plain(text) and marked(text, highlight) in order.
// Overlapping or out-of-range highlights are skipped.
template <class Plain, class Marked>
void walk(const Segment& s, Plain plain, Marked marked) {
  auto hs = s.highlights;
  std::stable_sort(hs.begin(), hs.end(),
                   [](const Highlight& a, const Highlight& b) { return a.span.start < b.span.start; });
  std::size_t pos = 0;
  std::string_view text = s.text;
  for (const auto& h : hs) {
    if (h.span.start < pos || h.span.end > text.size() || h.span.empty()) continue;
    plain(text.substr(pos, h.span.start - pos));
    marked(text.substr(h.span.start, h.span.size()), h);
    pos = h.span.end;
  }
  plain(text.substr(pos));
}

std::string plain_text(const Project& project) {
  std::string out;
  for (std::size_t i = 0; i < project.pages.size(); ++i) {
    if (i > 0) out += '\f';
    const auto& segs = project.pages[i].target_segments;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (k > 0) out += '\n';
      out += segs[k].text;
    }
  }
  return out;
}

std::string html(const Project& project) {
  std::string out =
      "<!DOCTYPE html>\n<html lang=\"" + html_escape(project.target_lang) +
      "\">\n<head>\n<meta charset=\"utf-8\">\n<title>" + html_escape(project.name) +
      "</title>\n<style>\n"
      ".global { background: yellow; }\n"
      ".dictionary { background: lightgreen; }\n"
      ".tm { background: lightblue; }\n"
      "</style>\n</head>\n<body>\n";
  for (const auto& page : project.pages) {
    out += "<section class=\"page\" id=\"page-" + std::to_string(page.index) + "\">\n";
    for (const auto& s : page.target_segments) {
      out += "<p data-segment=\"" + html_escape(s.id) + "\">";
      walk(
          s, [&](std::string_view t) { out += html_escape(t); },
          [&](std::string_view t, const Highlight& h) {
            out += "<span class=\"" + std::string(css_class(h.provenance)) + "\"";
            if (!h.rule_id.empty()) out += " data-rule=\"" + html_escape(h.rule_id) + "\"";
            out += ">" + html_escape(t) + "</span>";
          });
      out += "</p>\n";
    }
    out += "</section>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

std::string latex(const Project& project) {
  std::string out =
      "\\documentclass{article}\n"
      "\\usepackage{fontspec}\n"
      "\\usepackage{xcolor}\n"
      "\\usepackage{soul}\n"
      "\\newfontfamily\\devanagarifont[Script=Devanagari]{Noto Serif Devanagari}\n"
      "\\newcommand{\\globalrepl}[1]{\\sethlcolor{yellow}\\hl{#1}}\n"
      "\\newcommand{\\dictrepl}[1]{\\sethlcolor{green}\\hl{#1}}\n"
      "\\newcommand{\\tmrepl}[1]{\\sethlcolor{cyan}\\hl{#1}}\n"
      "\\begin{document}\n";
  for (const auto& page : project.pages) {
    out += "\\section*{Page " + std::to_string(page.index) + "}\n";
    for (const auto& s : page.target_segments) {
      walk(
          s, [&](std::string_view t) { out += latex_escape(t); },
          [&](std::string_view t, const Highlight& h) {
            out += std::string(latex_macro(h.provenance)) + "{" + latex_escape(t) + "}";
          });
      out += "\n\n";
    }
  }
  out += "\\end{document}\n";
  return out;
}

}  // namespace

std::string_view to_string(ExportFormat format) {
  switch (format) {
    case ExportFormat::PlainText: return "PlainText";
    case ExportFormat::HTML: return "HTML";
    case ExportFormat::LaTeX: return "LaTeX";
  }
  return "PlainText";
}

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "PlainText" || name == "txt" || name == "text" || name == "plain")
    return ExportFormat::PlainText;
  if (name == "HTML" || name == "html") return ExportFormat::HTML;
  if (name == "LaTeX" || name == "latex" || name == "tex") return ExportFormat::LaTeX;
  return std::nullopt;
}

std::string_view file_extension(ExportFormat format) {
  switch (format) {
    case ExportFormat::PlainText: return ".txt";
    case ExportFormat::HTML: return ".html";
    case ExportFormat::LaTeX: return ".tex";
  }
  return ".txt";
}

std::string_view content_type(ExportFormat format) {
  switch (format) {
    case ExportFormat::PlainText: return "text/plain; charset=utf-8";
    case ExportFormat::HTML: return "text/html; charset=utf-8";
    case ExportFormat::LaTeX: return "application/x-latex; charset=utf-8";
  }
  return "text/plain; charset=utf-8";
}

std::string export_project(const Project& project, ExportFormat format) {
  switch (format) {
    case ExportFormat::PlainText: return plain_text(project);
    case ExportFormat::HTML: return html(project);
    case ExportFormat::LaTeX: return latex(project);
  }
  return {};
}

}  // namespace postedit
