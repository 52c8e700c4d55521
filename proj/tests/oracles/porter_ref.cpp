#include "porter_ref.hpp"

#include <cstring>

namespace oracles {

namespace {

// C-style working state, guarded for single-threaded test use.
char b[256];
int k, k0, j;

int cons(int i) {
    switch (b[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u': return 0;
        case 'y': return (i == k0) ? 1 : !cons(i - 1);
        default: return 1;
    }
}

int m() {
    int n = 0;
    int i = k0;
    while (1) {
        if (i > j) return n;
        if (!cons(i)) break;
        i++;
    }
    i++;
    while (1) {
        while (1) {
            if (i > j) return n;
            if (cons(i)) break;
            i++;
        }
        i++;
        n++;
        while (1) {
            if (i > j) return n;
            if (!cons(i)) break;
            i++;
        }
        i++;
    }
}

int vowelinstem() {
    int i;
    for (i = k0; i <= j; i++)
        if (!cons(i)) return 1;
    return 0;
}

int doublec(int i) {
    if (i < k0 + 1) return 0;
    if (b[i] != b[i - 1]) return 0;
    return cons(i);
}

int cvc(int i) {
    if (i < k0 + 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return 0;
    {
        int ch = b[i];
        if (ch == 'w' || ch == 'x' || ch == 'y') return 0;
    }
    return 1;
}

int ends(const char* s) {
    int length = s[0];
    if (s[length] != b[k]) return 0;
    if (length > k - k0 + 1) return 0;
    if (memcmp(b + k - length + 1, s + 1, (size_t)length) != 0) return 0;
    j = k - length;
    return 1;
}

void setto(const char* s) {
    int length = s[0];
    memmove(b + j + 1, s + 1, (size_t)length);
    k = j + length;
}

void r(const char* s) {
    if (m() > 0) setto(s);
}

void step1ab() {
    if (b[k] == 's') {
        if (ends("\04" "sses")) k -= 2;
        else if (ends("\03" "ies")) setto("\01" "i");
        else if (b[k - 1] != 's') k--;
    }
    if (ends("\03" "eed")) {
        if (m() > 0) k--;
    } else if ((ends("\02" "ed") || ends("\03" "ing")) && vowelinstem()) {
        k = j;
        if (ends("\02" "at")) setto("\03" "ate");
        else if (ends("\02" "bl")) setto("\03" "ble");
        else if (ends("\02" "iz")) setto("\03" "ize");
        else if (doublec(k)) {
            k--;
            {
                int ch = b[k];
                if (ch == 'l' || ch == 's' || ch == 'z') k++;
            }
        } else if (m() == 1 && cvc(k)) setto("\01" "e");
    }
}

void step1c() {
    if (ends("\01" "y") && vowelinstem()) b[k] = 'i';
}

void step2() {
    switch (b[k - 1]) {
        case 'a':
            if (ends("\07" "ational")) { r("\03" "ate"); break; }
            if (ends("\06" "tional")) { r("\04" "tion"); break; }
            break;
        case 'c':
            if (ends("\04" "enci")) { r("\04" "ence"); break; }
            if (ends("\04" "anci")) { r("\04" "ance"); break; }
            break;
        case 'e':
            if (ends("\04" "izer")) { r("\03" "ize"); break; }
            break;
        case 'l':
            if (ends("\03" "bli")) { r("\03" "ble"); break; }
            if (ends("\04" "alli")) { r("\02" "al"); break; }
            if (ends("\05" "entli")) { r("\03" "ent"); break; }
            if (ends("\03" "eli")) { r("\01" "e"); break; }
            if (ends("\05" "ousli")) { r("\03" "ous"); break; }
            break;
        case 'o':
            if (ends("\07" "ization")) { r("\03" "ize"); break; }
            if (ends("\05" "ation")) { r("\03" "ate"); break; }
            if (ends("\04" "ator")) { r("\03" "ate"); break; }
            break;
        case 's':
            if (ends("\05" "alism")) { r("\02" "al"); break; }
            if (ends("\07" "iveness")) { r("\03" "ive"); break; }
            if (ends("\07" "fulness")) { r("\03" "ful"); break; }
            if (ends("\07" "ousness")) { r("\03" "ous"); break; }
            break;
        case 't':
            if (ends("\05" "aliti")) { r("\02" "al"); break; }
            if (ends("\05" "iviti")) { r("\03" "ive"); break; }
            if (ends("\06" "biliti")) { r("\03" "ble"); break; }
            break;
        case 'g':
            if (ends("\04" "logi")) { r("\03" "log"); break; }
            break;
    }
}

void step3() {
    switch (b[k]) {
        case 'e':
            if (ends("\05" "icate")) { r("\02" "ic"); break; }
            if (ends("\05" "ative")) { r("\00" ""); break; }
            if (ends("\05" "alize")) { r("\02" "al"); break; }
            break;
        case 'i':
            if (ends("\05" "iciti")) { r("\02" "ic"); break; }
            break;
        case 'l':
            if (ends("\04" "ical")) { r("\02" "ic"); break; }
            if (ends("\03" "ful")) { r("\00" ""); break; }
            break;
        case 's':
            if (ends("\04" "ness")) { r("\00" ""); break; }
            break;
    }
}

void step4() {
    switch (b[k - 1]) {
        case 'a': if (ends("\02" "al")) break; return;
        case 'c':
            if (ends("\04" "ance")) break;
            if (ends("\04" "ence")) break;
            return;
        case 'e': if (ends("\02" "er")) break; return;
        case 'i': if (ends("\02" "ic")) break; return;
        case 'l':
            if (ends("\04" "able")) break;
            if (ends("\04" "ible")) break;
            return;
        case 'n':
            if (ends("\03" "ant")) break;
            if (ends("\05" "ement")) break;
            if (ends("\04" "ment")) break;
            if (ends("\03" "ent")) break;
            return;
        case 'o':
            if (ends("\03" "ion") && j >= k0 && (b[j] == 's' || b[j] == 't')) break;
            if (ends("\02" "ou")) break;
            return;
        case 's': if (ends("\03" "ism")) break; return;
        case 't':
            if (ends("\03" "ate")) break;
            if (ends("\03" "iti")) break;
            return;
        case 'u': if (ends("\03" "ous")) break; return;
        case 'v': if (ends("\03" "ive")) break; return;
        case 'z': if (ends("\03" "ize")) break; return;
        default: return;
    }
    if (m() > 1) k = j;
}

void step5() {
    j = k;
    if (b[k] == 'e') {
        int a = m();
        if (a > 1 || (a == 1 && !cvc(k - 1))) k--;
    }
    if (b[k] == 'l' && doublec(k) && m() > 1) k--;
}

} // namespace

std::string porter_reference(std::string_view word) {
    if (word.size() >= sizeof(b)) {
        return std::string(word);
    }
    memcpy(b, word.data(), word.size());
    k0 = 0;
    k = (int)word.size() - 1;
    if (k <= k0 + 1) {
        return std::string(word);
    }
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return std::string(b, (size_t)(k + 1));
}

} // namespace oracles
