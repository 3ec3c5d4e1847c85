JNIEXPORT void JNICALL Java_Gate_nativeRun(JNIEnv *env, jclass cls, jobject data) {
    Frame *frame = env->GetDirectBufferAddress(data);
    char *src = frame->bytes;
    char *dst = frame->scratch;
    int sn = (int)sizeof(src);
    if (sn <= (int)sizeof(dst)) {
        dst = src;
    }
}
