#ifndef LTEV_RNG_H
#define LTEV_RNG_H

#include "ltev/config.h"

#include <cstdint>
#include <random>
#include <string>

namespace ltev
{

using RngStream = std::mt19937_64;

/**
 * Independent stream for one (module, id) pair: the master seed XORed with
 * the stable hash of "module:id". Streams of different modules never share
 * state, so enabling one subsystem leaves the draws of the others untouched.
 */
inline RngStream
MakeStream(std::uint64_t masterSeed, const std::string& module, const std::string& id)
{
    return RngStream(masterSeed ^ StableHash(module + ":" + id));
}

inline RngStream
MakeStream(std::uint64_t masterSeed, const std::string& module, int id)
{
    return MakeStream(masterSeed, module, std::to_string(id));
}

} // namespace ltev

#endif /* LTEV_RNG_H */
