#include "heckel/parallel.hpp"

namespace heckel {

unsigned resolve_threads(unsigned requested)
{
    if (requested > 0)
        return requested;
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

}
