class Frame {
public:
    char *bytes;
    char *scratch;
    int length;
};
