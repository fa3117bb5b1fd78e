// Copyright 2026 The scaleguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "scaleguard/attack.hpp"

#include <array>
#include <cstdint>
#include <string>

#include "scaleguard/errors.hpp"

namespace scaleguard {
namespace {

constexpr int kUnwritten = -1;

// Visits every carrier position an embed writes, in target raster order, calling
// visit(target_col, target_row, carrier_col, carrier_row).
template <typename Visitor>
void for_each_write(const Image& carrier, const Embed& embed, Visitor&& visit) {
  const int width = embed.at.width;
  const int height = embed.at.height;
  std::vector<VulnerableTaps> cols(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) {
    cols[static_cast<std::size_t>(i)] = vulnerable_taps(i, width, carrier.width());
  }
  for (int j = 0; j < height; ++j) {
    const VulnerableTaps ty = vulnerable_taps(j, height, carrier.height());
    const std::array<int, 2> rows = {ty.lo, ty.hi};
    const int row_count = ty.lo == ty.hi ? 1 : 2;
    for (int i = 0; i < width; ++i) {
      const VulnerableTaps& tx = cols[static_cast<std::size_t>(i)];
      const std::array<int, 2> xs = {tx.lo, tx.hi};
      const int col_count = tx.lo == tx.hi ? 1 : 2;
      for (int r = 0; r < row_count; ++r) {
        for (int c = 0; c < col_count; ++c) {
          visit(i, j, xs[static_cast<std::size_t>(c)], rows[static_cast<std::size_t>(r)]);
        }
      }
    }
  }
}

}  // namespace

void validate(const EmbedPlan& plan) {
  for (std::size_t e = 0; e < plan.embeds.size(); ++e) {
    const Embed& embed = plan.embeds[e];
    const std::string tag = "embed " + std::to_string(e) + ": ";
    if (embed.at.width < 1 || embed.at.height < 1) {
      throw PlanError(tag + "target scale must be at least 1x1");
    }
    if (embed.small.width() != embed.at.width || embed.small.height() != embed.at.height) {
      throw PlanError(tag + "image is " + ScaleSpec::of(embed.small).to_string() +
                      " but target scale is " + embed.at.to_string());
    }
    if (embed.at.width >= plan.carrier.width() || embed.at.height >= plan.carrier.height()) {
      throw PlanError(tag + "target scale " + embed.at.to_string() +
                      " is not strictly smaller than carrier " +
                      ScaleSpec::of(plan.carrier).to_string());
    }
    if (embed.small.channels() != plan.carrier.channels()) {
      throw PlanError(tag + "has " + std::to_string(embed.small.channels()) +
                      " channels, carrier has " +
                      std::to_string(plan.carrier.channels()));
    }
  }
}

AttackResult generate_attack(const EmbedPlan& plan) {
  validate(plan);
  const Image& carrier = plan.carrier;
  const int ch = carrier.channels();
  std::vector<std::uint8_t> out = Image(carrier).release();

  // Last embed that wrote each position, and whether a second embed did.
  std::vector<int> owner(carrier.pixel_count(), kUnwritten);
  std::vector<bool> collided(carrier.pixel_count(), false);
  // Target pixel (as i + j * width) that last wrote a position in this embed.
  std::vector<std::int64_t> writer(carrier.pixel_count(), -1);

  EmbedReport report;
  std::size_t written_total = 0;
  for (std::size_t e = 0; e < plan.embeds.size(); ++e) {
    const Embed& embed = plan.embeds[e];
    const int id = static_cast<int>(e);
    std::size_t written = 0;
    std::size_t overlaps = 0;
    for_each_write(carrier, embed, [&](int i, int j, int col, int row) {
      const std::size_t pos = static_cast<std::size_t>(row) *
                                  static_cast<std::size_t>(carrier.width()) +
                              static_cast<std::size_t>(col);
      const std::int64_t target =
          static_cast<std::int64_t>(j) * embed.at.width + static_cast<std::int64_t>(i);
      if (owner[pos] == id) {
        if (writer[pos] != target) ++overlaps;
      } else {
        if (owner[pos] == kUnwritten) {
          ++written_total;
        } else {
          collided[pos] = true;
        }
        owner[pos] = id;
        ++written;
      }
      writer[pos] = target;
      for (int c = 0; c < ch; ++c) {
        out[pos * static_cast<std::size_t>(ch) + static_cast<std::size_t>(c)] =
            embed.small.at(i, j, c);
      }
    });
    report.pixels_written.push_back(written);
    report.self_overlaps.push_back(overlaps);
  }

  for (std::size_t pos = 0; pos < collided.size(); ++pos) {
    if (collided[pos]) report.collision_positions.push_back(pos);
  }
  report.collisions = report.collision_positions.size();
  report.fraction_perturbed =
      static_cast<double>(written_total) / static_cast<double>(carrier.pixel_count());

  return {Image(carrier.width(), carrier.height(), ch, std::move(out)),
          std::move(report)};
}

Image perturbation_mask(const EmbedPlan& plan) {
  validate(plan);
  const Image& carrier = plan.carrier;
  std::vector<std::uint8_t> mask(carrier.pixel_count(), 0);
  for (const Embed& embed : plan.embeds) {
    for_each_write(carrier, embed, [&](int, int, int col, int row) {
      mask[static_cast<std::size_t>(row) * static_cast<std::size_t>(carrier.width()) +
           static_cast<std::size_t>(col)] = 255;
    });
  }
  return Image(carrier.width(), carrier.height(), 1, std::move(mask));
}

}  // namespace scaleguard
