public class Local {
    int read(int fd) {
        return 0;
    }
    void go() {
        read(5);
    }
}
