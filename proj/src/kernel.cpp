#include "pentago/kernel.h"

#include <bit>

namespace pentago {

bool line_has_children(const LineId& parent) {
  const Section& s = sections_of_slice(parent.slice)[parent.section];
  return s.counts[parent.dim][0] + s.counts[parent.dim][1] < 9;
}

std::optional<ChildLine> child_line(const LineId& parent) {
  if (parent.slice >= 35 || !line_has_children(parent)) return std::nullopt;
  const Section& s = sections_of_slice(parent.slice)[parent.section];
  const auto [cs, d] = child_section(s, parent.dim, s.to_move());
  ChildLine out{LineId{parent.slice + 1, section_index(cs), quadrant_image(d, parent.dim), {}}, d};
  for (int q = 0; q < 4; q++)
    if (q != parent.dim) out.line.block[quadrant_image(d, q)] = parent.block[q];
  return out;
}

MappedChild map_child(Board b, Cell x, GlobalSym d) {
  const auto& t = detail::quadrant_tables();
  const Board c0 = place(b, x, b.to_move());
  const int sign = d.reflected() ? -1 : 1;
  MappedChild m;
  int r[4];
  for (int k = 0; k < 4; k++) {
    const uint16_t img = t.global(d, c0.quadrant(k));
    m.index[quadrant_image(d, k)] = dict_index(img);
    r[k] = sign * t.rmin_turns[img];
  }
  m.h = GroupElem{LocalRot::from(r[0], r[1], r[2], r[3]), d};
  return m;
}

namespace {

int local_offset(const Index4& shape, const Index4& block, const Index4& index) {
  int off = 0;
  for (int i = 0; i < 4; i++) off = off * block_extent(shape[i], block[i]) + (index[i] - kBlockSize * block[i]);
  return off;
}

}  // namespace

std::vector<std::vector<SuperValue>> compute_line(const LineId& parent, const LineInput& input,
                                                  const std::vector<int>& coords_in, const SuperFilter& keep) {
  const auto& t = detail::quadrant_tables();
  const Section& s = sections_of_slice(parent.slice)[parent.section];
  const Index4 shape = section_shape(s);
  const int q = parent.dim;
  if (!line_has_children(parent)) throw Error(Errc::full_quadrant, to_string(parent) + " has no children");
  const Color c = s.to_move();
  const bool direct = parent.slice == 35;

  std::optional<ChildLine> cl = child_line(parent);
  Section cs;
  Index4 cshape{};
  if (!direct) {
    cs = sections_of_slice(parent.slice + 1)[cl->line.section];
    cshape = section_shape(cs);
    const int len = block_grid(cs)[cl->line.dim];
    if (int(input.size()) != len)
      throw Error(Errc::dimension_mismatch, to_string(cl->line) + " has " + std::to_string(len) + " blocks, got " +
                                                std::to_string(input.size()));
  }
  const GlobalSym d = direct ? GlobalSym{} : cl->d;

  std::vector<int> coords = coords_in;
  if (coords.empty())
    for (int i = 0; i < block_grid(s)[q]; i++) coords.push_back(i);

  std::vector<std::vector<SuperValue>> out;
  out.reserve(coords.size());
  for (int bc : coords) {
    Index4 block = parent.block;
    block[q] = bc;
    Index4 ext;
    for (int i = 0; i < 4; i++) ext[i] = block_extent(shape[i], block[i]);
    std::vector<SuperValue> values(size_t(ext[0]) * ext[1] * ext[2] * ext[3]);
    size_t pos = 0;
    Index4 idx;
    for (int i0 = 0; i0 < ext[0]; i0++)
      for (int i1 = 0; i1 < ext[1]; i1++)
        for (int i2 = 0; i2 < ext[2]; i2++)
          for (int i3 = 0; i3 < ext[3]; i3++, pos++) {
            idx = {kBlockSize * block[0] + i0, kBlockSize * block[1] + i1, kBlockSize * block[2] + i2,
                   kBlockSize * block[3] + i3};
            if (keep && !keep(idx)) continue;
            const Board b = board_at(s, idx);
            const uint16_t qcode = b.quadrant(q);
            uint16_t empty = uint16_t(511 & ~(t.black[qcode] | t.white[qcode]));
            SuperValue acc;
            while (empty) {
              const int local = std::countr_zero(empty);
              empty &= uint16_t(empty - 1);
              SuperValue child;
              if (direct) {
                child = full_board_value(place(b, Cell::from_bit(9 * q + local), c));
              } else {
                const MappedChild m = map_child(b, Cell::from_bit(9 * q + local), d);
                const Index4& cidx = m.index;
                const int along = cidx[cl->line.dim] / kBlockSize;
                Index4 cblock = cl->line.block;
                cblock[cl->line.dim] = along;
                for (int k = 0; k < 4; k++)
                  if (cidx[k] / kBlockSize != cblock[k])
                    throw Error(Errc::dimension_mismatch, "child of " + to_string(parent) + " lies off " + to_string(cl->line));
                const auto& data = input[along];
                if (data.empty())
                  throw Error(Errc::missing_input, "block " + std::to_string(along) + " of " + to_string(cl->line));
                const size_t off = size_t(local_offset(cshape, cblock, cidx));
                if (off >= data.size()) throw Error(Errc::shape_mismatch, "short input block on " + to_string(cl->line));
                child = transform_super(inverse(m.h), data[off]);
              }
              acc = merge_value(acc, negate_value(child));
            }
            SuperValue v{rmax(acc.win), rmax(acc.notloss)};
            v.win |= placement_wins(b, c, q);
            v.notloss |= v.win;
            values[pos] = adjudicate_terminals(v, super_wins(b, c), super_wins(b, other(c)));
          }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace pentago
