#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "postedit/alignment.hpp"
#include "postedit/bundle.hpp"
#include "postedit/editing.hpp"
#include "postedit/error.hpp"
#include "postedit/export.hpp"
#include "postedit/lexicon.hpp"
#include "postedit/suggest.hpp"
#include "postedit/text.hpp"

namespace py = pybind11;
using namespace postedit;

namespace {

using Rows = std::vector<std::vector<double>>;
using Links = std::vector<std::pair<std::size_t, std::size_t>>;

Links to_pairs(const AlignmentLinkSet& links) {
  Links out;
  for (const auto& l : links) out.emplace_back(l.src, l.tgt);
  return out;
}

Rows to_rows(const SimilarityMatrix& m) {
  Rows out(m.n_src());
  for (std::size_t i = 0; i < m.n_src(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

py::dict hunk_dict(const DiffHunk& h) {
  py::dict d;
  d["old_text"] = h.old_text;
  d["new_text"] = h.new_text;
  d["old_tokens"] = py::make_tuple(h.old_tokens.begin, h.old_tokens.end);
  d["new_tokens"] = py::make_tuple(h.new_tokens.begin, h.new_tokens.end);
  return d;
}

py::dict rule_dict(const ReplacementRule& r) {
  py::dict d;
  d["rule_id"] = r.rule_id;
  d["find"] = r.find;
  d["replace"] = r.replace;
  d["provenance"] = std::string(to_string(r.provenance));
  return d;
}

ReplacementScope scope_of(const std::string& name) {
  auto s = parse_scope(name);
  if (!s) throw Error(ErrorCode::InvalidArgument, "unknown scope " + name);
  return *s;
}

std::vector<ReplacementRule> rules_of(const std::vector<std::pair<std::string, std::string>>& pairs,
                                      const Project& p) {
  std::vector<ReplacementRule> rules;
  for (const auto& [find, replace] : pairs)
    rules.push_back(make_rule(find, replace, Provenance::GlobalReplacement, p.target_lang));
  return rules;
}

// Thin object-style wrapper; every mutation is stamped with `author`.
struct PyProject {
  Project p;

  static PyProject from_bundle(const py::bytes& data) { return {load_bundle(std::string(data))}; }
  static PyProject from_archive(const py::bytes& data) { return {load_project(std::string(data))}; }

  py::bytes save() const { return py::bytes(save_project(p)); }

  std::vector<std::vector<std::string>> target_texts() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& page : p.pages) {
      auto& texts = out.emplace_back();
      for (const auto& s : page.target_segments) texts.push_back(s.text);
    }
    return out;
  }

  std::vector<std::string> statuses() const {
    std::vector<std::string> out;
    for (const auto& page : p.pages) out.emplace_back(to_string(page.status));
    return out;
  }

  void set_text(int page, const std::string& id, const std::string& text, const std::string& author) {
    set_segment_text(p, page, id, text, EditStamp::now(author));
  }

  py::list save_page(int page, const std::string& author) {
    py::list out;
    for (const auto& r : postedit::save_page(p, page, EditStamp::now(author))) out.append(rule_dict(r));
    return out;
  }

  void advance(int page, const std::string& role, const std::string& author) {
    auto r = parse_role(role);
    if (!r) throw Error(ErrorCode::InvalidArgument, "unknown role " + role);
    transition_status(p, page, *r, EditStamp::now(author));
  }

  std::size_t preview_count(const std::vector<std::pair<std::string, std::string>>& rules,
                            const std::string& scope, int current_page) const {
    return preview(rules_of(rules, p), scope_of(scope), p, current_page).total_count;
  }

  std::size_t replace(const std::vector<std::pair<std::string, std::string>>& rules,
                      const std::string& scope, int current_page, const std::string& author) {
    return apply(rules_of(rules, p), scope_of(scope), p, current_page, EditStamp::now(author));
  }

  std::string tm_tsv() const { return p.tm.to_tsv(); }

  std::size_t apply_tm_tsv(const std::string& tsv, const std::string& author) {
    return apply_tm(TranslationMemory::from_tsv(tsv), p, EditStamp::now(author));
  }

  std::string export_as(const std::string& format) const {
    auto f = parse_export_format(format);
    if (!f) throw Error(ErrorCode::InvalidArgument, "unknown format " + format);
    return export_project(p, *f);
  }

  py::list suggestions(int page) const {
    py::list out;
    for (const auto& s : page_suggestions(p, page)) {
      py::dict d;
      d["segment_id"] = s.segment_id;
      d["current_text"] = s.current_text;
      d["proposed_text"] = s.proposed_text;
      d["source_term"] = s.entry.source_term;
      d["lexicon"] = s.lexicon;
      out.append(d);
    }
    return out;
  }

  std::vector<std::pair<int, std::pair<std::int64_t, std::int64_t>>> stats(std::int64_t cap) const {
    std::vector<std::pair<int, std::pair<std::int64_t, std::int64_t>>> out;
    for (const auto& s : summary(p.log, cap))
      out.push_back({s.page_index, {s.edit_count, s.active_time_ms}});
    return out;
  }
};

}  // namespace

PYBIND11_MODULE(_postedit, m) {
  m.doc() = "Post-editing core: alignment, diff, replacement, bundles.";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = error;
      PyErr_SetObject(cls.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
    }
  });

  m.def("slp1_to_devanagari", &slp1_to_devanagari);
  m.def("nfc", &nfc);
  m.def(
      "tokenize",
      [](const std::string& text, const std::string& lang) {
        std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
        for (const auto& t : tokenize(text, lang)) out.emplace_back(t.surface, t.span.start, t.span.end);
        return out;
      },
      py::arg("text"), py::arg("lang") = "");
  m.def(
      "split_sentences",
      [](const std::string& text, const std::string& lang, const std::vector<std::string>& abbr) {
        AbbreviationList list(std::set<std::string>(abbr.begin(), abbr.end()));
        std::vector<std::string> out;
        for (const auto& s : split_sentences(text, lang, list)) out.push_back(text.substr(s.start, s.size()));
        return out;
      },
      py::arg("text"), py::arg("lang") = "", py::arg("abbreviations") = std::vector<std::string>{});

  m.def("greedy_align", [](const Rows& rows, double floor) {
    return to_pairs(greedy_align(SimilarityMatrix::from_rows(rows), floor));
  }, py::arg("matrix"), py::arg("floor") = 0.0);
  m.def("intersect_align", [](const Rows& rows, double c) {
    return to_pairs(intersect_align(SimilarityMatrix::from_rows(rows), c));
  }, py::arg("matrix"), py::arg("threshold") = 0.001);
  m.def("normalize", [](const Rows& rows, const std::string& axis) {
    return to_rows(normalize(SimilarityMatrix::from_rows(rows), axis == "cols" ? Axis::Columns : Axis::Rows));
  }, py::arg("matrix"), py::arg("axis") = "rows");
  m.def("dice_bigram", &dice_bigram);

  m.def("diff", [](const std::string& a, const std::string& b) {
    py::list out;
    for (const auto& h : diff_segments(a, b)) out.append(hunk_dict(h));
    return out;
  });
  m.def("diff_patch", [](const std::string& a, const std::string& b) {
    return patch(a, diff_segments(a, b));
  }, "Diffs a against b and patches a with the result.");

  m.def("lexicon_matches", [](const std::string& tsv, const std::string& text) {
    auto lex = Lexicon::parse(tsv, "lexicon");
    auto tokens = tokenize(text);
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& match : find_matches(tokens, lex)) {
      std::string surface;
      for (auto i = match.range.begin; i < match.range.end; ++i)
        surface += (surface.empty() ? "" : " ") + tokens[i].surface;
      out.emplace_back(surface, match.entry->target_terms);
    }
    return out;
  });

  py::class_<PyProject>(m, "Project")
      .def_static("from_bundle", &PyProject::from_bundle)
      .def_static("from_archive", &PyProject::from_archive)
      .def("save", &PyProject::save)
      .def_property_readonly("id", [](const PyProject& self) { return self.p.id; })
      .def_property_readonly("version", [](const PyProject& self) { return self.p.version; })
      .def_property_readonly("page_count", [](const PyProject& self) { return self.p.pages.size(); })
      .def("target_texts", &PyProject::target_texts)
      .def("statuses", &PyProject::statuses)
      .def("set_text", &PyProject::set_text, py::arg("page"), py::arg("segment_id"), py::arg("text"),
           py::arg("author") = "python")
      .def("save_page", &PyProject::save_page, py::arg("page"), py::arg("author") = "python")
      .def("advance", &PyProject::advance, py::arg("page"), py::arg("role"), py::arg("author") = "python")
      .def("preview_count", &PyProject::preview_count, py::arg("rules"), py::arg("scope"),
           py::arg("current_page") = 1)
      .def("replace", &PyProject::replace, py::arg("rules"), py::arg("scope"), py::arg("current_page") = 1,
           py::arg("author") = "python")
      .def("tm_tsv", &PyProject::tm_tsv)
      .def("apply_tm", &PyProject::apply_tm_tsv, py::arg("tsv"), py::arg("author") = "python")
      .def("export", &PyProject::export_as, py::arg("format") = "PlainText")
      .def("suggestions", &PyProject::suggestions)
      .def("stats", &PyProject::stats, py::arg("idle_cap_ms") = kDefaultIdleCapMs)
      .def("__eq__", [](const PyProject& a, const PyProject& b) { return a.p == b.p; });
}
