#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "postedit/model.hpp"

namespace postedit {

enum class ExportFormat { PlainText, HTML, LaTeX };

std::string_view to_string(ExportFormat format);
// Accepts the enum names and the short forms txt, html, tex/latex.
std::optional<ExportFormat> parse_export_format(std::string_view name);
std::string_view file_extension(ExportFormat format);
std::string_view content_type(ExportFormat format);

// Target side only. Plain text: segments one per line, pages separated by a
// single form feed. HTML and LaTeX keep provenance highlights.
std::string export_project(const Project& project, ExportFormat format);

}  // namespace postedit
