#include <benchmark/benchmark.h>

#include <string>

#include "sxgame/protocol.hpp"

using namespace sxgame;

namespace {

ControlMessage sample_submit(std::size_t len) {
  std::string text;
  for (std::size_t i = 0; i < len; ++i) text += "cells|need\\energy\n"[i % 18];
  return ControlMessage(Opcode::SE_SUBMIT, {"p1", text});
}

}  // namespace

static void BM_EncodeControl(benchmark::State& state) {
  const auto m = sample_submit(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encode_control(m));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeControl)->Range(16, 4096);

static void BM_DecodeControl(benchmark::State& state) {
  const auto frame = encode_control(sample_submit(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decode_frame(frame));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(frame.str().size()));
}
BENCHMARK(BM_DecodeControl)->Range(16, 4096);

static void BM_DecodeChat(benchmark::State& state) {
  const auto frame = encode_chat({"p3", "#!ROLL is not a command here, just chat"});
  for (auto _ : state) benchmark::DoNotOptimize(decode_frame(frame));
}
BENCHMARK(BM_DecodeChat);
