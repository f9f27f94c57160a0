#pragma once

#include <memory>

#include "sxgame/content.hpp"

inline std::shared_ptr<const sxgame::ContentBundle> bench_content() {
  static const auto bundle = std::make_shared<const sxgame::ContentBundle>(sxgame::load_content(SXGAME_BENCH_CONTENT_DIR));
  return bundle;
}
